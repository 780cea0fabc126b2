#include "trapdoc/extraction.hpp"

#include <set>

#include "trapdoc/errors.hpp"
#include "trapdoc/pdf_io.hpp"

namespace trapdoc {

const char* to_string(VisibilityClass c) {
    switch (c) {
        case VisibilityClass::Visible: return "visible";
        case VisibilityClass::InvisibleSizeZero: return "size-zero";
        case VisibilityClass::InvisibleRenderMode3: return "render-mode-3";
        case VisibilityClass::InvisibleAlphaZero: return "alpha-zero";
        case VisibilityClass::SuspectWhiteOnWhite: return "white-on-white";
    }
    return "?";
}

VisibilityClass classify_visibility(const TextState& st, double white_threshold) {
    if (st.font_size <= 0.0) return VisibilityClass::InvisibleSizeZero;
    if (st.render_mode == 3) return VisibilityClass::InvisibleRenderMode3;
    if (st.fill_alpha <= 0.0) return VisibilityClass::InvisibleAlphaZero;
    if (st.fill_gray && *st.fill_gray >= white_threshold)
        return VisibilityClass::SuspectWhiteOnWhite;
    return VisibilityClass::Visible;
}

PdfDict page_resources(const Document& doc, const PdfDict& page) {
    const PdfDict* node = &page;
    for (int depth = 0; depth < 64; ++depth) {
        if (const PdfValue* res = node->find("Resources")) {
            const PdfValue& r = doc.resolve(*res);
            if (r.is_dict()) return r.dict();
        }
        const PdfValue* parent = node->find("Parent");
        if (!parent) break;
        const PdfValue& p = doc.resolve(*parent);
        if (!p.is_dict()) break;
        node = &p.dict();
    }
    return {};
}

std::string page_content_bytes(const Document& doc, const PdfDict& page) {
    const PdfValue* contents = page.find("Contents");
    if (!contents) return {};
    const PdfValue& c = doc.resolve(*contents);
    if (c.is_stream()) return decode_stream(c.stream(), doc);
    std::string out;
    if (c.is_array()) {
        for (const PdfValue& part : c.array()) {
            const PdfValue& s = doc.resolve(part);
            if (!s.is_stream()) continue;
            if (!out.empty()) out.push_back('\n');
            out += decode_stream(s.stream(), doc);
        }
    }
    return out;
}

namespace {

void collect_runs(const Document& doc, const std::vector<ContentOp>& ops,
                  const PdfDict& resources, std::set<std::pair<int, int>>& active,
                  int depth, int& span_base, std::vector<TextRun>& out) {
    if (depth > 16) throw CircularReference("form XObject nesting too deep");
    std::vector<TextRun> runs = scan_text_runs(ops, resources, doc);
    int local_base = span_base;
    int max_span = -1;
    std::size_t next_run = 0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        while (next_run < runs.size() && runs[next_run].op_index == i) {
            TextRun r = runs[next_run++];
            if (r.span_id >= 0) {
                max_span = std::max(max_span, r.span_id);
                r.span_id += local_base;
            }
            out.push_back(std::move(r));
        }
        const ContentOp& op = ops[i];
        if (op.op != "Do" || op.operands.empty() || !op.operands[0].is_name()) continue;
        const PdfValue* xobjs = resources.find("XObject");
        if (!xobjs) continue;
        const PdfValue& xd = doc.resolve(*xobjs);
        if (!xd.is_dict()) continue;
        const PdfValue* entry = xd.dict().find(op.operands[0].name().value);
        if (!entry) continue;
        std::pair<int, int> key{0, 0};
        if (entry->is_ref()) {
            key = {entry->ref().obj, entry->ref().gen};
            if (active.count(key)) continue;  // cycle
        }
        const PdfValue& xo = doc.resolve(*entry);
        if (!xo.is_stream()) continue;
        const PdfValue* subtype = xo.stream().dict.find("Subtype");
        if (!subtype || !doc.resolve(*subtype).is_name() ||
            doc.resolve(*subtype).name().value != "Form")
            continue;
        PdfDict form_res = resources;
        if (const PdfValue* fr = xo.stream().dict.find("Resources")) {
            const PdfValue& r = doc.resolve(*fr);
            if (r.is_dict()) form_res = r.dict();
        }
        std::string data = decode_stream(xo.stream(), doc);
        std::vector<ContentOp> form_ops = parse_content(data);
        active.insert(key);
        span_base = local_base + max_span + 1;
        collect_runs(doc, form_ops, form_res, active, depth + 1, span_base, out);
        if (!out.empty()) {
            // form boundary is never a flush join
        }
        active.erase(key);
    }
    while (next_run < runs.size()) {
        TextRun r = runs[next_run++];
        if (r.span_id >= 0) {
            max_span = std::max(max_span, r.span_id);
            r.span_id += local_base;
        }
        out.push_back(std::move(r));
    }
    span_base = local_base + max_span + 1;
}

std::string decode_run(const Document& doc, const TextRun& run) {
    FontInfo fi;
    if (run.font) fi = font_info(*run.font, doc);
    return decode_shown_bytes(fi, run.raw);
}

}  // namespace

std::vector<TextRun> collect_page_runs(const Document& doc, ObjectId page_id) {
    const PdfValue* page = doc.object(page_id);
    if (!page || !page->is_dict()) throw PageError("page object missing");
    PdfDict res = page_resources(doc, page->dict());
    std::string content = page_content_bytes(doc, page->dict());
    std::vector<ContentOp> ops = parse_content(content);
    std::vector<TextRun> out;
    std::set<std::pair<int, int>> active;
    int span_base = 0;
    collect_runs(doc, ops, res, active, 0, span_base, out);
    return out;
}

std::string extract_text(const Document& doc, View view, const ExtractOptions& opts) {
    std::string out;
    for (std::size_t p = 0; p < doc.page_order.size(); ++p) {
        std::vector<TextRun> runs;
        try {
            runs = collect_page_runs(doc, doc.page_order[p]);
        } catch (const Error& e) {
            throw PageError("page " + std::to_string(p) + ": " + e.what());
        }
        std::string page_text;
        const TextRun* prev = nullptr;
        for (const TextRun& run : runs) {
            VisibilityClass cls = classify_visibility(run.state, opts.white_threshold);
            bool keep = true;
            if (view == View::Human) {
                if (cls == VisibilityClass::InvisibleSizeZero ||
                    cls == VisibilityClass::InvisibleRenderMode3)
                    keep = false;
                else if (opts.strict_white && (cls == VisibilityClass::SuspectWhiteOnWhite ||
                                               cls == VisibilityClass::InvisibleAlphaZero))
                    keep = false;
            }
            if (!keep) continue;
            std::string text = decode_run(doc, run);
            if (text.empty()) continue;
            if (prev) {
                bool flush = view == View::Human && run.span_id >= 0 &&
                             run.span_id == prev->span_id;
                if (!flush) page_text.push_back(' ');
            }
            page_text += text;
            prev = &run;
        }
        if (p) out.push_back('\n');
        out += page_text;
    }
    return out;
}

std::vector<HiddenRunReport> list_hidden_runs(const Document& doc, const ExtractOptions& opts) {
    std::vector<HiddenRunReport> reports;
    for (std::size_t p = 0; p < doc.page_order.size(); ++p) {
        std::vector<TextRun> runs;
        try {
            runs = collect_page_runs(doc, doc.page_order[p]);
        } catch (const Error& e) {
            throw PageError("page " + std::to_string(p) + ": " + e.what());
        }
        for (const TextRun& run : runs) {
            VisibilityClass cls = classify_visibility(run.state, opts.white_threshold);
            if (cls == VisibilityClass::Visible) continue;
            HiddenRunReport r;
            r.page_index = p;
            r.op_index = run.op_index;
            r.cls = cls;
            r.text = decode_run(doc, run);
            r.byte_length = run.raw.size();
            reports.push_back(std::move(r));
        }
    }
    return reports;
}

}  // namespace trapdoc
