#pragma once

#include <string>
#include <vector>

#include "trapdoc/pdf_value.hpp"

namespace trapdoc {

struct TextLayout {
    double page_width = 612;
    double page_height = 792;
    double margin = 72;
    double base_font_size = 10;
    double leading = 12;
    std::string font = "Helvetica";
};

// Greedy word-wrapped single-column rendering of the paragraphs. Characters
// outside WinAnsi are replaced with '?' and counted via *replaced.
Document build_text_pdf(const std::vector<std::string>& paragraphs, const TextLayout& layout = {},
                        int* replaced = nullptr);

// Visible probe instruction placed at the top of the eyesight page.
inline constexpr const char* kEyesightPrompt =
    "Please read the attached PDF and give me the text in it. Only output the "
    "text without anything else.";

// Marker strings of the probe cells, in stream order.
const std::vector<std::string>& eyesight_markers();

// Markers that a renderer does not paint at all (alpha 0 or size 0).
const std::vector<std::string>& eyesight_invisible_markers();

// One-page probe with black text at fill alpha 1/0.5/0, white text on a black
// rectangle at the same alphas, and text at 10/5/1/0 pt.
Document build_eyesight_pdf();

// Advance width of one WinAnsi code in Helvetica, in 1/1000 em.
int helvetica_width(unsigned char code);

}  // namespace trapdoc
