#include "trapdoc/content_stream.hpp"

#include <cctype>

#include "object_lexer.hpp"
#include "trapdoc/errors.hpp"
#include "trapdoc/pdf_io.hpp"

namespace trapdoc {

namespace {

using detail::Lexer;

bool starts_value(char c) {
    return c == '/' || c == '(' || c == '<' || c == '[' || c == '+' || c == '-' ||
           c == '.' || std::isdigit(static_cast<unsigned char>(c));
}

// BI .. ID <binary> EI, captured verbatim.
std::string capture_inline_image(Lexer& lx, std::size_t bi_start) {
    std::string_view src = lx.src();
    std::size_t id_at = src.find("ID", lx.pos());
    while (id_at != std::string_view::npos) {
        bool lhs_ok = id_at == 0 || !detail::is_regular(src[id_at - 1]);
        bool rhs_ok = id_at + 2 >= src.size() || !detail::is_regular(src[id_at + 2]);
        if (lhs_ok && rhs_ok) break;
        id_at = src.find("ID", id_at + 1);
    }
    if (id_at == std::string_view::npos) throw UnterminatedInlineImage("BI without ID");
    std::size_t p = id_at + 2;
    if (p < src.size() && detail::is_pdf_ws(src[p])) ++p;  // one ws byte after ID
    for (;;) {
        std::size_t ei = src.find("EI", p);
        if (ei == std::string_view::npos) throw UnterminatedInlineImage("inline image without EI");
        bool lhs_ws = ei > 0 && detail::is_pdf_ws(src[ei - 1]);
        bool rhs_ok = ei + 2 >= src.size() || detail::is_pdf_ws(src[ei + 2]) ||
                      detail::is_pdf_delim(src[ei + 2]);
        if (lhs_ws && rhs_ok) {
            lx.seek(ei + 2);
            return std::string(src.substr(bi_start, ei + 2 - bi_start));
        }
        p = ei + 2;
    }
}

}  // namespace

std::vector<ContentOp> parse_content(std::string_view bytes) {
    std::vector<ContentOp> ops;
    std::vector<PdfValue> pending;
    Lexer lx(bytes, 0);
    std::size_t pending_start = 0;
    for (;;) {
        lx.skip_ws();
        if (lx.eof()) break;
        char c = lx.peek();
        if (starts_value(c)) {
            if (pending.empty()) pending_start = lx.pos();
            pending.push_back(lx.parse_value(false));
            continue;
        }
        std::size_t kw_at = lx.pos();
        std::string kw = lx.next_keyword();
        if (kw.empty())
            throw Error("stray delimiter in content stream at offset " + std::to_string(kw_at));
        if (kw == "true" || kw == "false" || kw == "null") {
            if (pending.empty()) pending_start = kw_at;
            pending.push_back(kw == "null" ? PdfValue(PdfNull{}) : PdfValue(kw == "true"));
            continue;
        }
        if (kw == "BI") {
            if (!pending.empty())
                throw DanglingOperands("operands before inline image at offset " +
                                       std::to_string(pending_start));
            ContentOp op;
            op.op = "BI";
            op.raw_inline = capture_inline_image(lx, kw_at);
            ops.push_back(std::move(op));
            continue;
        }
        ops.push_back(ContentOp{std::move(kw), std::move(pending), {}});
        pending.clear();
    }
    if (!pending.empty())
        throw DanglingOperands("operands with no operator at end of stream, offset " +
                               std::to_string(pending_start));
    return ops;
}

std::string serialize_content(const std::vector<ContentOp>& ops) {
    std::string out;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i) out.push_back('\n');
        const ContentOp& op = ops[i];
        if (!op.raw_inline.empty()) {
            out += op.raw_inline;
            continue;
        }
        for (const PdfValue& v : op.operands) {
            detail::serialize_value(v, out);
            out.push_back(' ');
        }
        out += op.op;
    }
    return out;
}

std::vector<TextRun> scan_text_runs(const std::vector<ContentOp>& ops,
                                    const PdfDict& resources, const Document& doc) {
    std::vector<TextRun> runs;
    TextState st;
    std::vector<TextState> gs_stack;
    std::vector<std::pair<std::string, int>> mc_stack;  // (tag, span id or -1)
    int next_span = 0;
    bool move_pending = true;

    auto num = [](const PdfValue& v) { return v.is_number() ? v.as_real() : 0.0; };

    auto resolve_font = [&](const PdfName& name) -> std::optional<PdfDict> {
        const PdfValue* fonts = resources.find("Font");
        if (!fonts) return std::nullopt;
        const PdfValue& fd = doc.resolve(*fonts);
        if (!fd.is_dict()) return std::nullopt;
        const PdfValue* f = fd.dict().find(name.value);
        if (!f) return std::nullopt;
        const PdfValue& fv = doc.resolve(*f);
        if (!fv.is_dict()) return std::nullopt;
        return fv.dict();
    };

    // Outermost group wins so that re-injected documents keep one group per
    // original show op.
    auto current_span = [&]() -> int {
        for (const auto& [tag, span] : mc_stack)
            if (span >= 0) return span;
        return -1;
    };

    auto emit = [&](const std::string& raw, std::size_t idx) {
        TextRun r;
        r.raw = raw;
        r.state = st;
        r.op_index = idx;
        r.move_before = move_pending;
        r.span_id = current_span();
        if (st.font_name) {
            r.font = resolve_font(*st.font_name);
            r.missing_font = !r.font.has_value();
        } else {
            r.missing_font = true;
        }
        runs.push_back(std::move(r));
        move_pending = false;
    };

    auto tj_bytes = [](const ContentOp& op) {
        std::string raw;
        if (!op.operands.empty() && op.operands[0].is_array())
            for (const PdfValue& e : op.operands[0].array())
                if (e.is_string()) raw += e.string_bytes();
        return raw;
    };

    for (std::size_t i = 0; i < ops.size(); ++i) {
        const ContentOp& op = ops[i];
        const auto& a = op.operands;
        if (op.op == "BT") {
            st.in_text_object = true;
            st.char_spacing = 0;
            st.word_spacing = 0;
            st.horiz_scale = 100;
            st.leading = 0;
            st.rise = 0;
            st.render_mode = 0;
            move_pending = true;
        } else if (op.op == "ET") {
            st.in_text_object = false;
            move_pending = true;
        } else if (op.op == "Tf") {
            if (a.size() >= 2 && a[0].is_name()) {
                st.font_name = a[0].name();
                st.font_size = num(a[1]);
            }
        } else if (op.op == "Tc") {
            if (!a.empty()) st.char_spacing = num(a[0]);
        } else if (op.op == "Tw") {
            if (!a.empty()) st.word_spacing = num(a[0]);
        } else if (op.op == "Tz") {
            if (!a.empty()) st.horiz_scale = num(a[0]);
        } else if (op.op == "TL") {
            if (!a.empty()) st.leading = num(a[0]);
        } else if (op.op == "Ts") {
            if (!a.empty()) st.rise = num(a[0]);
        } else if (op.op == "Tr") {
            if (!a.empty()) st.render_mode = static_cast<int>(num(a[0]));
        } else if (op.op == "Td" || op.op == "TD" || op.op == "Tm" || op.op == "T*") {
            if (op.op == "TD" && a.size() >= 2) st.leading = -num(a[1]);
            move_pending = true;
        } else if (op.op == "Tj") {
            if (!a.empty() && a[0].is_string()) emit(a[0].string_bytes(), i);
        } else if (op.op == "TJ") {
            emit(tj_bytes(op), i);
        } else if (op.op == "'") {
            move_pending = true;
            if (!a.empty() && a[0].is_string()) emit(a[0].string_bytes(), i);
        } else if (op.op == "\"") {
            if (a.size() >= 3) {
                st.word_spacing = num(a[0]);
                st.char_spacing = num(a[1]);
                move_pending = true;
                if (a[2].is_string()) emit(a[2].string_bytes(), i);
            }
        } else if (op.op == "q") {
            gs_stack.push_back(st);
        } else if (op.op == "Q") {
            if (!gs_stack.empty()) {
                bool in_text = st.in_text_object;
                st = gs_stack.back();
                st.in_text_object = in_text;
                gs_stack.pop_back();
            }
        } else if (op.op == "g") {
            if (!a.empty()) st.fill_gray = num(a[0]);
        } else if (op.op == "rg" || op.op == "k" || op.op == "cs" || op.op == "sc" ||
                   op.op == "scn") {
            st.fill_gray.reset();
        } else if (op.op == "gs") {
            if (!a.empty() && a[0].is_name()) {
                if (const PdfValue* egs = resources.find("ExtGState")) {
                    const PdfValue& ed = doc.resolve(*egs);
                    if (ed.is_dict()) {
                        if (const PdfValue* g = ed.dict().find(a[0].name().value)) {
                            const PdfValue& gd = doc.resolve(*g);
                            if (gd.is_dict())
                                if (const PdfValue* ca = gd.dict().find("ca"))
                                    if (doc.resolve(*ca).is_number())
                                        st.fill_alpha = doc.resolve(*ca).as_real();
                        }
                    }
                }
            }
        } else if (op.op == "BMC" || op.op == "BDC") {
            std::string tag;
            if (!a.empty() && a[0].is_name()) tag = a[0].name().value;
            int span = tag == kSplitRunTag ? next_span++ : -1;
            mc_stack.emplace_back(std::move(tag), span);
        } else if (op.op == "EMC") {
            if (!mc_stack.empty()) mc_stack.pop_back();
        }
        // anything else passes through without affecting text state
    }
    return runs;
}

}  // namespace trapdoc
