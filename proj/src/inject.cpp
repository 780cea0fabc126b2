#include "trapdoc/inject.hpp"

#include <optional>

#include "trapdoc/content_stream.hpp"
#include "trapdoc/errors.hpp"
#include "trapdoc/extraction.hpp"
#include "trapdoc/fonts.hpp"
#include "trapdoc/pdf_io.hpp"
#include "trapdoc/perturb.hpp"

namespace trapdoc {

std::vector<std::string> split_segments(std::string_view raw, int n, int code_unit,
                                        bool* odd_tail) {
    std::vector<std::string> out;
    if (raw.empty()) return out;
    std::size_t step = static_cast<std::size_t>(n) * code_unit;
    std::size_t even = raw.size();
    if (code_unit == 2 && raw.size() % 2 != 0) {
        even = raw.size() - 1;
        if (odd_tail) *odd_tail = true;
    }
    std::size_t pos = 0;
    while (pos < even) {
        std::size_t len = std::min(step, even - pos);
        out.emplace_back(raw.substr(pos, len));
        pos += len;
    }
    if (even < raw.size()) {
        // odd trailing byte stays attached to the final segment
        if (out.empty()) out.emplace_back();
        out.back() += raw[even];
    }
    return out;
}

namespace {

struct TrackedState {
    std::optional<PdfName> font_name;
    double font_size = 0.0;
    double tc = 0.0, tw = 0.0;
    int tr = 0;
    int code_unit = 1;
};

struct PayloadCursor {
    const std::vector<std::string>& words;
    InjectionConfig::FillPolicy policy;
    std::size_t next = 0;

    bool available() const {
        return policy == InjectionConfig::FillPolicy::Cycle || next < words.size();
    }
    const std::string& take() { return words[next++ % words.size()]; }
    bool exhausted() const { return next >= words.size(); }
};

class PageRewriter {
public:
    PageRewriter(const Document& doc, const PdfDict& resources, std::string payload_font,
                 const InjectionConfig& cfg, PayloadCursor& cursor, InjectionReport& report,
                 PageInjection& page)
        : doc_(doc),
          resources_(resources),
          payload_font_(std::move(payload_font)),
          cfg_(cfg),
          cursor_(cursor),
          report_(report),
          page_(page) {}

    std::vector<ContentOp> rewrite(const std::vector<ContentOp>& ops) {
        for (const ContentOp& op : ops) step(op);
        return std::move(out_);
    }

    bool touched() const { return touched_; }

private:
    void step(const ContentOp& op) {
        const auto& a = op.operands;
        if (op.op == "Tf") {
            if (a.size() >= 2 && a[0].is_name()) set_font(a[0].name(), a[1].as_real());
            out_.push_back(op);
        } else if (op.op == "Tc") {
            if (!a.empty() && a[0].is_number()) st_.tc = a[0].as_real();
            out_.push_back(op);
        } else if (op.op == "Tw") {
            if (!a.empty() && a[0].is_number()) st_.tw = a[0].as_real();
            out_.push_back(op);
        } else if (op.op == "Tr") {
            if (!a.empty() && a[0].is_number()) st_.tr = static_cast<int>(a[0].as_real());
            out_.push_back(op);
        } else if (op.op == "BT") {
            in_text_ = true;
            st_.tc = st_.tw = 0.0;
            st_.tr = 0;
            boundary_pending_ = false;
            out_.push_back(op);
        } else if (op.op == "ET") {
            in_text_ = false;
            boundary_pending_ = false;
            out_.push_back(op);
        } else if (op.op == "q") {
            stack_.push_back(st_);
            out_.push_back(op);
        } else if (op.op == "Q") {
            if (!stack_.empty()) {
                st_ = stack_.back();
                stack_.pop_back();
            }
            out_.push_back(op);
        } else if (op.op == "Tj" || op.op == "TJ" || op.op == "'" || op.op == "\"") {
            rewrite_show(op);
        } else {
            out_.push_back(op);
        }
    }

    void set_font(const PdfName& name, double size) {
        st_.font_name = name;
        st_.font_size = size;
        st_.code_unit = 1;
        const PdfValue* fonts = resources_.find("Font");
        if (!fonts) return;
        const PdfValue& fd = doc_.resolve(*fonts);
        if (!fd.is_dict()) return;
        const PdfValue* f = fd.dict().find(name.value);
        if (!f) return;
        const PdfValue& fv = doc_.resolve(*f);
        if (fv.is_dict()) st_.code_unit = font_info(fv.dict(), doc_).code_unit_bytes();
    }

    void rewrite_show(const ContentOp& op) {
        const auto& a = op.operands;
        // normalize ' and " into explicit state + line ops followed by a show
        std::vector<PdfValue> items;
        if (op.op == "Tj" && a.size() == 1 && a[0].is_string()) {
            items.push_back(a[0]);
        } else if (op.op == "TJ" && a.size() == 1 && a[0].is_array()) {
            items = a[0].array();
        } else if (op.op == "'" && a.size() == 1 && a[0].is_string()) {
            items.push_back(a[0]);
        } else if (op.op == "\"" && a.size() == 3 && a[2].is_string()) {
            items.push_back(a[2]);
        } else {
            out_.push_back(op);  // malformed; leave alone
            return;
        }

        if (!st_.font_name) {
            // no font to restore after an invisible run; leave the op alone
            out_.push_back(op);
            boundary_pending_ = false;
            return;
        }

        // run-boundary gap between consecutive show ops of one text object
        if (boundary_pending_ && in_text_) {
            ++report_.gaps_total;
            insert_word_if_available();
        }

        if (op.op == "'") {
            out_.push_back(ContentOp{"T*", {}, {}});
        } else if (op.op == "\"") {
            st_.tw = a[0].is_number() ? a[0].as_real() : 0.0;
            st_.tc = a[1].is_number() ? a[1].as_real() : 0.0;
            out_.push_back(ContentOp{"Tw", {a[0]}, {}});
            out_.push_back(ContentOp{"Tc", {a[1]}, {}});
            out_.push_back(ContentOp{"T*", {}, {}});
        }

        // one TJ array per visible segment; kern numbers stay attached to the
        // segment they followed
        std::vector<PdfArray> pieces;
        for (const PdfValue& item : items) {
            if (item.is_number()) {
                if (pieces.empty()) pieces.emplace_back();
                pieces.back().push_back(item);
                continue;
            }
            if (!item.is_string()) continue;
            bool hex = std::holds_alternative<PdfHexString>(item.raw());
            for (std::string& seg : split_segments(item.string_bytes(), cfg_.segment_chars,
                                                   st_.code_unit)) {
                PdfArray arr;
                if (hex)
                    arr.push_back(PdfValue(PdfHexString{std::move(seg)}));
                else
                    arr.push_back(PdfValue(PdfLiteralString{std::move(seg)}));
                pieces.push_back(std::move(arr));
            }
        }
        if (pieces.empty()) {
            out_.push_back(op);
            return;
        }

        touched_ = true;
        ++page_.runs_rewritten;
        out_.push_back(ContentOp{"BMC", {PdfValue(PdfName{kSplitRunTag})}, {}});
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            emit_piece(std::move(pieces[i]));
            if (i + 1 < pieces.size()) {
                ++report_.gaps_total;
                insert_word_if_available();
            }
        }
        out_.push_back(ContentOp{"EMC", {}, {}});
        boundary_pending_ = in_text_;
    }

    void emit_piece(PdfArray arr) {
        if (arr.size() == 1 && arr[0].is_string())
            out_.push_back(ContentOp{"Tj", {std::move(arr[0])}, {}});
        else
            out_.push_back(ContentOp{"TJ", {PdfValue(std::move(arr))}, {}});
    }

    void insert_word_if_available() {
        if (!cursor_.available()) return;
        const std::string& word = cursor_.take();
        std::vector<ContentOp> ins;
        bool combined = cfg_.mode == InjectionConfig::Mode::SizeZeroPlusRenderMode3;
        ins.push_back(ContentOp{"Tf", {PdfValue(PdfName{payload_font_}), PdfValue(0)}, {}});
        if (st_.tc != 0.0) ins.push_back(ContentOp{"Tc", {PdfValue(0)}, {}});
        if (st_.tw != 0.0) ins.push_back(ContentOp{"Tw", {PdfValue(0)}, {}});
        if (combined && st_.tr != 3) ins.push_back(ContentOp{"Tr", {PdfValue(3)}, {}});
        ins.push_back(ContentOp{"Tj", {PdfValue(PdfLiteralString{encode_winansi(word)})}, {}});
        if (combined && st_.tr != 3) ins.push_back(ContentOp{"Tr", {PdfValue(st_.tr)}, {}});
        if (st_.tw != 0.0) ins.push_back(ContentOp{"Tw", {PdfValue(st_.tw)}, {}});
        if (st_.tc != 0.0) ins.push_back(ContentOp{"Tc", {PdfValue(st_.tc)}, {}});
        ins.push_back(ContentOp{"Tf", {PdfValue(*st_.font_name), PdfValue(st_.font_size)}, {}});

        ++report_.words_inserted;
        ++page_.words_inserted;
        for (auto& o : ins) out_.push_back(std::move(o));
    }

    const Document& doc_;
    const PdfDict& resources_;
    std::string payload_font_;
    const InjectionConfig& cfg_;
    PayloadCursor& cursor_;
    InjectionReport& report_;
    PageInjection& page_;

    std::vector<ContentOp> out_;
    TrackedState st_;
    std::vector<TrackedState> stack_;
    bool in_text_ = false;
    bool boundary_pending_ = false;
    bool touched_ = false;
};

std::string probe_font_name(const Document& doc, const PdfDict& resources,
                            const std::string& base) {
    const PdfValue* fonts = resources.find("Font");
    if (!fonts) return base;
    const PdfValue& fd = doc.resolve(*fonts);
    if (!fd.is_dict()) return base;
    std::string name = base;
    for (int suffix = 0; fd.dict().contains(name); ++suffix)
        name = base + std::to_string(suffix);
    return name;
}

std::int64_t page_content_raw_size(const Document& doc, const PdfDict& page) {
    const PdfValue* contents = page.find("Contents");
    if (!contents) return 0;
    const PdfValue& c = doc.resolve(*contents);
    if (c.is_stream()) return static_cast<std::int64_t>(c.stream().data.size());
    std::int64_t total = 0;
    if (c.is_array())
        for (const PdfValue& part : c.array()) {
            const PdfValue& s = doc.resolve(part);
            if (s.is_stream()) total += static_cast<std::int64_t>(s.stream().data.size());
        }
    return total;
}

}  // namespace

std::pair<Document, InjectionReport> inject_payload(const Document& doc,
                                                    const std::string& payload,
                                                    const InjectionConfig& config) {
    if (doc.trailer.contains("Encrypt"))
        throw EncryptedDocument("cannot inject into an encrypted document");
    std::vector<std::string> words = tokenize_payload(payload);

    InjectionReport report;
    report.payload_words = words.size();
    report.bytes_before = write_document(doc).size();

    Document out = doc;
    PayloadCursor cursor{words, config.fill_policy, 0};
    int next_obj = out.max_object_number() + 1;
    std::optional<ObjectId> payload_font_id;

    // Old content stream objects are replaced or dropped, never left orphaned
    // in the output -- the size report must reflect insertions only. Streams
    // shared between pages are kept.
    std::map<ObjectId, int> content_refs;
    for (ObjectId pid : doc.page_order) {
        const PdfValue* pobj = doc.object(pid);
        if (!pobj || !pobj->is_dict()) continue;
        const PdfValue* contents = pobj->dict().find("Contents");
        if (!contents) continue;
        if (contents->is_ref()) ++content_refs[{contents->ref().obj, contents->ref().gen}];
        const PdfValue& c = doc.resolve(*contents);
        if (c.is_array())
            for (const PdfValue& part : c.array())
                if (part.is_ref()) ++content_refs[{part.ref().obj, part.ref().gen}];
    }

    for (std::size_t p = 0; p < doc.page_order.size(); ++p) {
        ObjectId page_id = doc.page_order[p];
        const PdfValue* page_obj = doc.object(page_id);
        if (!page_obj || !page_obj->is_dict()) continue;
        const PdfDict& page_dict = page_obj->dict();
        PdfDict resources = page_resources(doc, page_dict);
        std::string content = page_content_bytes(doc, page_dict);
        if (content.empty()) continue;
        std::vector<ContentOp> ops = parse_content(content);

        PageInjection page;
        page.page_index = p;
        std::string font_name = probe_font_name(doc, resources, config.payload_font_name);
        PageRewriter rw(doc, resources, font_name, config, cursor, report, page);
        std::vector<ContentOp> new_ops = rw.rewrite(ops);

        if (rw.touched()) {
            if (!payload_font_id) {
                PdfDict font;
                font.set("Type", PdfValue(PdfName{"Font"}));
                font.set("Subtype", PdfValue(PdfName{"Type1"}));
                font.set("BaseFont", PdfValue(PdfName{"Helvetica"}));
                font.set("Encoding", PdfValue(PdfName{"WinAnsiEncoding"}));
                payload_font_id = ObjectId{next_obj++, 0};
                out.objects.emplace(*payload_font_id, PdfValue(std::move(font)));
            }
            std::string new_content = serialize_content(new_ops);
            page.content_bytes_delta = static_cast<std::int64_t>(new_content.size()) -
                                       page_content_raw_size(doc, page_dict);
            if (page.content_bytes_delta > 0)
                report.insertion_bytes += static_cast<std::size_t>(page.content_bytes_delta);
            PdfStream st;
            st.data = std::move(new_content);
            st.dict.set("Length", PdfValue(static_cast<std::int64_t>(st.data.size())));

            PdfDict new_page = page_dict;
            const PdfValue* old_contents = page_dict.find("Contents");
            ObjectId content_id{0, 0};
            bool in_place = false;
            if (old_contents && old_contents->is_ref()) {
                ObjectId oid{old_contents->ref().obj, old_contents->ref().gen};
                const PdfValue* old_obj = doc.object(oid);
                if (old_obj && old_obj->is_stream() && content_refs[oid] == 1) {
                    content_id = oid;
                    in_place = true;
                }
            }
            if (!in_place) {
                // drop uniquely-referenced parts of a Contents array
                if (old_contents) {
                    const PdfValue& c = doc.resolve(*old_contents);
                    if (c.is_array())
                        for (const PdfValue& part : c.array())
                            if (part.is_ref() &&
                                content_refs[{part.ref().obj, part.ref().gen}] == 1)
                                out.objects.erase({part.ref().obj, part.ref().gen});
                }
                content_id = ObjectId{next_obj++, 0};
            }
            out.objects[content_id] = PdfValue(std::move(st));
            new_page.set("Contents", PdfValue(PdfReference{content_id.num, content_id.gen}));
            PdfDict new_res = resources;
            PdfDict font_map;
            if (const PdfValue* fonts = new_res.find("Font")) {
                const PdfValue& fd = doc.resolve(*fonts);
                if (fd.is_dict()) font_map = fd.dict();
            }
            font_map.set(font_name,
                         PdfValue(PdfReference{payload_font_id->num, payload_font_id->gen}));
            new_res.set("Font", PdfValue(std::move(font_map)));
            new_page.set("Resources", PdfValue(std::move(new_res)));
            out.objects[page_id] = PdfValue(std::move(new_page));
        }
        report.per_page.push_back(page);
    }

    report.payload_exhausted = cursor.policy == InjectionConfig::FillPolicy::SinglePass &&
                               cursor.exhausted();
    report.bytes_after = write_document(out).size();
    return {std::move(out), report};
}

}  // namespace trapdoc
