#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "trapdoc/pdf_value.hpp"

namespace trapdoc {

// One content-stream operator with its operand list. Unknown operators are
// carried verbatim. Inline images (BI..EI) are held opaque in raw_inline.
struct ContentOp {
    std::string op;
    std::vector<PdfValue> operands;
    std::string raw_inline;  // nonempty only for BI

    bool operator==(const ContentOp& o) const {
        return op == o.op && operands == o.operands && raw_inline == o.raw_inline;
    }
};

struct TextState {
    std::optional<PdfName> font_name;
    double font_size = 0.0;
    double char_spacing = 0.0;   // Tc
    double word_spacing = 0.0;   // Tw
    double horiz_scale = 100.0;  // Tz
    double leading = 0.0;        // TL
    double rise = 0.0;           // Ts
    int render_mode = 0;         // Tr
    std::optional<double> fill_gray = 0.0;  // absent in non-gray colorspaces
    double fill_alpha = 1.0;     // ExtGState /ca
    bool in_text_object = false;

    bool operator==(const TextState&) const = default;
};

// A decoded text-showing event together with the text state in effect.
struct TextRun {
    std::string raw;  // shown bytes; TJ string elements concatenated
    TextState state;
    std::optional<PdfDict> font;  // resolved via the page's /Font resources
    std::size_t op_index = 0;
    bool missing_font = false;
    bool move_before = false;  // a positioning or line operator preceded this run
    int span_id = -1;          // segment-group id from the injector's marked content
};

// Marked-content tag the injector wraps each rewritten show op in. Runs that
// share a span id were split from one original string and read back flush.
inline constexpr const char* kSplitRunTag = "SplitRun";

std::vector<ContentOp> parse_content(std::string_view bytes);
std::string serialize_content(const std::vector<ContentOp>& ops);

std::vector<TextRun> scan_text_runs(const std::vector<ContentOp>& ops,
                                    const PdfDict& resources, const Document& doc);

}  // namespace trapdoc
