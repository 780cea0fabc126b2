#pragma once

#include <string>
#include <vector>

#include "trapdoc/content_stream.hpp"
#include "trapdoc/fonts.hpp"
#include "trapdoc/pdf_value.hpp"

namespace trapdoc {

enum class VisibilityClass {
    Visible,
    InvisibleSizeZero,
    InvisibleRenderMode3,
    InvisibleAlphaZero,
    SuspectWhiteOnWhite,
};

const char* to_string(VisibilityClass c);

// Pure function of the text state. Order: size, render mode, alpha, gray.
VisibilityClass classify_visibility(const TextState& st, double white_threshold = 0.99);

enum class View { Stream, Human };

struct ExtractOptions {
    // Strict mode drops white-on-white and zero-alpha runs from the human
    // view; by default they count as rendered.
    bool strict_white = false;
    double white_threshold = 0.99;
};

// Stream view concatenates every run in operator order (the byte-stream LLM
// proxy); human view keeps only runs that render.
std::string extract_text(const Document& doc, View view, const ExtractOptions& opts = {});

struct HiddenRunReport {
    std::size_t page_index = 0;
    std::size_t op_index = 0;
    VisibilityClass cls = VisibilityClass::Visible;
    std::string text;
    std::size_t byte_length = 0;
};

// One report per non-visible text run; the defensive inspector.
std::vector<HiddenRunReport> list_hidden_runs(const Document& doc,
                                              const ExtractOptions& opts = {});

// All text runs of one page, with form XObjects expanded (once, cycle
// checked). Exposed for the injector and tests.
std::vector<TextRun> collect_page_runs(const Document& doc, ObjectId page_id);

// Resources for a page, honoring page-tree inheritance.
PdfDict page_resources(const Document& doc, const PdfDict& page);

// Decoded content of a page (multiple streams concatenated).
std::string page_content_bytes(const Document& doc, const PdfDict& page);

}  // namespace trapdoc
