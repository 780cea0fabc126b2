#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "object_lexer.hpp"
#include "trapdoc/errors.hpp"
#include "trapdoc/pdf_io.hpp"

namespace trapdoc {

namespace {

using detail::Lexer;

struct XrefEntry {
    int type = 1;           // 1 = offset, 2 = in object stream
    std::uint64_t offset = 0;  // type 1: byte offset; type 2: objstm number
    int gen_or_index = 0;      // type 1: generation; type 2: index within stream
};

// PNG row predictors (filter types 0-4) applied per DecodeParms.
std::string apply_png_predictors(const std::string& in, int colors, int bpc, int columns) {
    int bpp = std::max(1, colors * bpc / 8);
    std::size_t rowlen = static_cast<std::size_t>(columns) * bpp;
    std::string out;
    std::vector<unsigned char> prev(rowlen, 0), cur(rowlen, 0);
    std::size_t pos = 0;
    while (pos + 1 + rowlen <= in.size() + rowlen && pos < in.size()) {
        int ft = static_cast<unsigned char>(in[pos++]);
        std::size_t avail = std::min(rowlen, in.size() - pos);
        for (std::size_t i = 0; i < avail; ++i) cur[i] = static_cast<unsigned char>(in[pos + i]);
        for (std::size_t i = avail; i < rowlen; ++i) cur[i] = 0;
        pos += avail;
        for (std::size_t i = 0; i < rowlen; ++i) {
            unsigned left = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
            unsigned up = prev[i];
            unsigned ul = i >= static_cast<std::size_t>(bpp) ? prev[i - bpp] : 0;
            switch (ft) {
                case 0: break;
                case 1: cur[i] = static_cast<unsigned char>(cur[i] + left); break;
                case 2: cur[i] = static_cast<unsigned char>(cur[i] + up); break;
                case 3: cur[i] = static_cast<unsigned char>(cur[i] + (left + up) / 2); break;
                case 4: {
                    int p = static_cast<int>(left) + static_cast<int>(up) - static_cast<int>(ul);
                    int pa = std::abs(p - static_cast<int>(left));
                    int pb = std::abs(p - static_cast<int>(up));
                    int pc = std::abs(p - static_cast<int>(ul));
                    unsigned pred = (pa <= pb && pa <= pc) ? left : (pb <= pc ? up : ul);
                    cur[i] = static_cast<unsigned char>(cur[i] + pred);
                    break;
                }
                default:
                    throw CorruptStream("unknown PNG predictor row filter " + std::to_string(ft));
            }
        }
        out.append(reinterpret_cast<const char*>(cur.data()), rowlen);
        prev = cur;
    }
    return out;
}

class FileParser {
public:
    explicit FileParser(std::string_view src) : src_(src) {}

    Document parse() {
        parse_header();
        std::uint64_t start = find_startxref();
        load_xref_chain(start);
        if (doc_.trailer.contains("Encrypt"))
            throw UnsupportedEncryption("document has an /Encrypt entry; encrypted PDFs are not supported");
        materialize_objects();
        unpack_object_streams();
        build_page_order();
        return std::move(doc_);
    }

private:
    void parse_header() {
        // Tolerate a small amount of leading junk before the header.
        std::size_t at = src_.find("%PDF-");
        if (at == std::string_view::npos || at > 1024)
            throw MalformedHeader("missing %PDF- header");
        base_ = at;
        std::size_t end = at + 5;
        while (end < src_.size() && src_[end] != '\r' && src_[end] != '\n') ++end;
        doc_.version = std::string(src_.substr(at + 5, end - at - 5));
        if (doc_.version.empty()) doc_.version = "1.4";
    }

    std::uint64_t find_startxref() {
        std::size_t tail_at = src_.size() > 2048 ? src_.size() - 2048 : 0;
        std::size_t at = src_.rfind("startxref");
        if (at == std::string_view::npos || at < tail_at)
            at = src_.find("startxref", tail_at);
        if (at == std::string_view::npos) throw XrefNotFound("no startxref marker");
        Lexer lx(src_, at + 9);
        lx.skip_ws();
        PdfValue v = lx.parse_value(false);
        if (!v.is_int()) throw XrefNotFound("startxref offset is not an integer");
        return static_cast<std::uint64_t>(v.as_int()) + base_;
    }

    // Follows Prev / XRefStm chains; the section reached first (newest) wins.
    void load_xref_chain(std::uint64_t start) {
        std::set<std::uint64_t> seen;
        std::vector<std::uint64_t> queue{start};
        bool first = true;
        while (!queue.empty()) {
            std::uint64_t off = queue.front();
            queue.erase(queue.begin());
            if (!seen.insert(off).second) continue;
            if (seen.size() > 64) throw XrefNotFound("xref Prev chain too long");
            PdfDict trailer = load_xref_section(off);
            if (first) {
                doc_.trailer = trailer;
                first = false;
            }
            if (const PdfValue* x = trailer.find("XRefStm"); x && x->is_int())
                queue.push_back(static_cast<std::uint64_t>(x->as_int()) + base_);
            if (const PdfValue* p = trailer.find("Prev"); p && p->is_int())
                queue.push_back(static_cast<std::uint64_t>(p->as_int()) + base_);
        }
        if (first) throw XrefNotFound("no cross-reference section found");
    }

    PdfDict load_xref_section(std::uint64_t off) {
        if (off >= src_.size()) throw XrefNotFound("xref offset out of range");
        Lexer lx(src_, off);
        lx.skip_ws();
        if (lx.consume_keyword("xref")) return load_classic_table(lx);
        return load_xref_stream(off);
    }

    PdfDict load_classic_table(Lexer& lx) {
        for (;;) {
            lx.skip_ws();
            if (lx.consume_keyword("trailer")) break;
            PdfValue first = lx.parse_value(false);
            PdfValue count = lx.parse_value(false);
            if (!first.is_int() || !count.is_int()) throw XrefNotFound("malformed xref subsection header");
            int start = static_cast<int>(first.as_int());
            int n = static_cast<int>(count.as_int());
            lx.skip_ws();
            for (int i = 0; i < n; ++i) {
                std::size_t p = lx.pos();
                if (p + 18 > src_.size()) throw XrefNotFound("truncated xref table");
                std::string off10(src_.substr(p, 10));
                std::string gen5(src_.substr(p + 11, 5));
                char kind = src_[p + 17];
                lx.seek(p + 18);
                lx.skip_ws();
                int num = start + i;
                if (kind == 'n' && !xref_.count(num))
                    xref_[num] = XrefEntry{1, std::stoull(off10) + base_, std::stoi(gen5)};
            }
        }
        lx.skip_ws();
        PdfValue t = lx.parse_value(true);
        if (!t.is_dict()) throw XrefNotFound("trailer is not a dictionary");
        return t.dict();
    }

    PdfDict load_xref_stream(std::uint64_t off) {
        Lexer lx(src_, off);
        auto [id, val] = parse_indirect_object(lx, nullptr);
        if (!val.is_stream()) throw XrefNotFound("cross-reference stream expected");
        const PdfStream& st = val.stream();
        std::string data = decode_stream(st, doc_);
        const PdfValue* wv = st.dict.find("W");
        if (!wv || !wv->is_array() || wv->array().size() < 3)
            throw XrefNotFound("xref stream missing /W");
        int w[3];
        for (int i = 0; i < 3; ++i) w[i] = static_cast<int>(wv->array()[i].as_int());
        std::vector<std::pair<int, int>> ranges;
        if (const PdfValue* idx = st.dict.find("Index"); idx && idx->is_array()) {
            const PdfArray& a = idx->array();
            for (std::size_t i = 0; i + 1 < a.size(); i += 2)
                ranges.emplace_back(static_cast<int>(a[i].as_int()), static_cast<int>(a[i + 1].as_int()));
        } else {
            const PdfValue* sz = st.dict.find("Size");
            if (!sz) throw XrefNotFound("xref stream missing /Size");
            ranges.emplace_back(0, static_cast<int>(sz->as_int()));
        }
        std::size_t rec = static_cast<std::size_t>(w[0] + w[1] + w[2]);
        std::size_t pos = 0;
        auto field = [&](int width) -> std::uint64_t {
            std::uint64_t v = 0;
            for (int i = 0; i < width; ++i) v = (v << 8) | static_cast<unsigned char>(data[pos++]);
            return v;
        };
        for (auto [start, count] : ranges) {
            for (int i = 0; i < count && pos + rec <= data.size(); ++i) {
                std::uint64_t type = w[0] == 0 ? 1 : field(w[0]);
                std::uint64_t f2 = field(w[1]);
                std::uint64_t f3 = field(w[2]);
                int num = start + i;
                if (xref_.count(num)) continue;
                if (type == 1)
                    xref_[num] = XrefEntry{1, f2 + base_, static_cast<int>(f3)};
                else if (type == 2)
                    xref_[num] = XrefEntry{2, f2, static_cast<int>(f3)};
                // type 0 = free, skipped
            }
        }
        return st.dict;
    }

    // Parses "N G obj ... endobj" at the lexer position. in_progress guards
    // recursive Length resolution.
    std::pair<ObjectId, PdfValue> parse_indirect_object(Lexer& lx, std::set<int>* in_progress) {
        lx.skip_ws();
        PdfValue numv = lx.parse_value(false);
        PdfValue genv = lx.parse_value(false);
        lx.skip_ws();
        if (!numv.is_int() || !genv.is_int() || !lx.consume_keyword("obj"))
            throw Error("expected 'N G obj' at offset " + std::to_string(lx.pos()));
        ObjectId id{static_cast<int>(numv.as_int()), static_cast<int>(genv.as_int())};
        PdfValue body = lx.parse_value(true);
        lx.skip_ws();
        if (lx.consume_keyword("stream")) {
            if (!body.is_dict()) throw Error("stream keyword after non-dictionary");
            // exactly CRLF or LF after 'stream'
            if (!lx.eof() && lx.peek() == '\r') lx.seek(lx.pos() + 1);
            if (!lx.eof() && lx.peek() == '\n') lx.seek(lx.pos() + 1);
            std::size_t data_start = lx.pos();
            std::int64_t length = resolve_length(body.dict(), in_progress);
            std::size_t data_end = data_start + static_cast<std::size_t>(length);
            bool plausible = length >= 0 && data_end <= src_.size();
            if (plausible) {
                Lexer probe(src_, data_end);
                probe.skip_ws();
                if (!probe.at_keyword("endstream")) plausible = false;
            }
            if (!plausible) {
                std::size_t es = src_.find("endstream", data_start);
                if (es == std::string_view::npos) throw Error("missing endstream");
                data_end = es;
                while (data_end > data_start && (src_[data_end - 1] == '\n' || src_[data_end - 1] == '\r'))
                    --data_end;
            }
            PdfStream st;
            st.dict = body.dict();
            st.data = std::string(src_.substr(data_start, data_end - data_start));
            st.dict.set("Length", PdfValue(static_cast<std::int64_t>(st.data.size())));
            lx.seek(data_end);
            lx.skip_ws();
            lx.consume_keyword("endstream");
            body = PdfValue(std::move(st));
        }
        lx.skip_ws();
        lx.consume_keyword("endobj");
        return {id, std::move(body)};
    }

    std::int64_t resolve_length(const PdfDict& d, std::set<int>* in_progress) {
        const PdfValue* len = d.find("Length");
        if (!len) return -1;
        if (len->is_int()) return len->as_int();
        if (!len->is_ref()) return -1;
        int num = len->ref().obj;
        std::set<int> local;
        if (!in_progress) in_progress = &local;
        const PdfValue* obj = fetch_object(num, *in_progress);
        if (obj && obj->is_int()) return obj->as_int();
        return -1;
    }

    const PdfValue* fetch_object(int num, std::set<int>& in_progress) {
        auto it = doc_.objects.find(ObjectId{num, 0});
        if (it != doc_.objects.end()) return &it->second;
        // allow any generation
        for (auto& [id, v] : doc_.objects)
            if (id.num == num) return &v;
        auto xe = xref_.find(num);
        if (xe == xref_.end() || xe->second.type != 1) return nullptr;
        if (in_progress.size() > 32 || !in_progress.insert(num).second)
            throw CircularReference("circular object dependency at object " + std::to_string(num));
        Lexer lx(src_, xe->second.offset);
        auto [id, val] = parse_indirect_object(lx, &in_progress);
        in_progress.erase(num);
        auto [pos, _] = doc_.objects.emplace(id, std::move(val));
        return &pos->second;
    }

    void materialize_objects() {
        for (const auto& [num, e] : xref_) {
            if (e.type != 1) continue;
            std::set<int> guard;
            try {
                fetch_object(num, guard);
            } catch (const CircularReference&) {
                throw;
            } catch (const Error&) {
                // A dangling table entry for an object that was rewritten in a
                // later revision; ignore unless someone references it.
            }
        }
    }

    void unpack_object_streams() {
        for (const auto& [num, e] : xref_) {
            if (e.type != 2) continue;
            std::set<int> guard;
            const PdfValue* stm = fetch_object(static_cast<int>(e.offset), guard);
            if (!stm || !stm->is_stream()) continue;
            const PdfStream& os = stm->stream();
            std::string data = decode_stream(os, doc_);
            const PdfValue* nv = os.dict.find("N");
            const PdfValue* fv = os.dict.find("First");
            if (!nv || !fv) continue;
            int n = static_cast<int>(doc_.resolve(*nv).as_int());
            std::size_t first = static_cast<std::size_t>(doc_.resolve(*fv).as_int());
            Lexer hx(data, 0);
            std::vector<std::pair<int, std::size_t>> offsets;
            for (int i = 0; i < n; ++i) {
                PdfValue onum = hx.parse_value(false);
                PdfValue ooff = hx.parse_value(false);
                offsets.emplace_back(static_cast<int>(onum.as_int()),
                                     static_cast<std::size_t>(ooff.as_int()));
            }
            for (std::size_t i = 0; i < offsets.size(); ++i) {
                int onum = offsets[i].first;
                auto xe = xref_.find(onum);
                // Only entries the xref actually routes to this stream+index.
                if (xe == xref_.end() || xe->second.type != 2 ||
                    static_cast<int>(xe->second.offset) != static_cast<int>(e.offset) ||
                    xe->second.gen_or_index != static_cast<int>(i))
                    continue;
                Lexer ox(data, first + offsets[i].second);
                ObjectId id{onum, 0};
                if (!doc_.objects.count(id)) doc_.objects.emplace(id, ox.parse_value(true));
            }
        }
    }

    void build_page_order() {
        const PdfValue* root = doc_.trailer.find("Root");
        if (!root) throw XrefNotFound("trailer has no /Root");
        const PdfValue& catalog = doc_.resolve(*root);
        if (!catalog.is_dict()) throw UnresolvableReference("catalog unresolvable");
        const PdfValue* pages = catalog.dict().find("Pages");
        if (!pages) return;
        std::set<std::pair<int, int>> seen;
        walk_pages(*pages, seen, 0);
    }

    void walk_pages(const PdfValue& node_ref, std::set<std::pair<int, int>>& seen, int depth) {
        if (depth > 64) throw CircularReference("page tree too deep");
        ObjectId id{0, 0};
        if (node_ref.is_ref()) {
            id = {node_ref.ref().obj, node_ref.ref().gen};
            if (!seen.insert({id.num, id.gen}).second) return;
        }
        const PdfValue& node = doc_.resolve(node_ref);
        if (!node.is_dict()) return;
        const PdfDict& d = node.dict();
        const PdfValue* type = d.find("Type");
        bool is_pages = type && type->is_name() && type->name().value == "Pages";
        if (is_pages || (!type && d.contains("Kids"))) {
            if (const PdfValue* kids = d.find("Kids"); kids) {
                const PdfValue& ka = doc_.resolve(*kids);
                if (ka.is_array())
                    for (const PdfValue& k : ka.array()) walk_pages(k, seen, depth + 1);
            }
        } else {
            doc_.page_order.push_back(id);
        }
    }

    std::string_view src_;
    std::size_t base_ = 0;  // offset of %PDF- within the buffer
    Document doc_;
    std::map<int, XrefEntry> xref_;
};

}  // namespace

Document parse_document(std::string_view bytes) { return FileParser(bytes).parse(); }

std::string decode_stream(const PdfStream& stream, const Document& doc) {
    const PdfValue* filter = stream.dict.find("Filter");
    bool flate = false;
    if (filter) {
        const PdfValue& f = doc.resolve(*filter);
        if (f.is_name()) {
            if (f.name().value != "FlateDecode")
                throw UnsupportedFilter("unsupported stream filter /" + f.name().value);
            flate = true;
        } else if (f.is_array()) {
            if (f.array().size() > 1)
                throw UnsupportedFilter("filter chains are not supported");
            if (f.array().size() == 1) {
                const PdfValue& f0 = doc.resolve(f.array()[0]);
                if (!f0.is_name() || f0.name().value != "FlateDecode")
                    throw UnsupportedFilter("unsupported stream filter in array");
                flate = true;
            }
        } else if (!f.is_null()) {
            throw UnsupportedFilter("malformed /Filter entry");
        }
    }
    std::string out = flate ? flate_decode(stream.data) : stream.data;

    const PdfValue* parms = stream.dict.find("DecodeParms");
    if (!parms) return out;
    const PdfValue& pv = doc.resolve(*parms);
    const PdfDict* pd = nullptr;
    if (pv.is_dict()) pd = &pv.dict();
    if (pv.is_array() && !pv.array().empty()) {
        const PdfValue& p0 = doc.resolve(pv.array()[0]);
        if (p0.is_dict()) pd = &p0.dict();
    }
    if (!pd) return out;
    int predictor = 1, colors = 1, bpc = 8, columns = 1;
    if (const PdfValue* v = pd->find("Predictor")) predictor = static_cast<int>(doc.resolve(*v).as_int());
    if (const PdfValue* v = pd->find("Colors")) colors = static_cast<int>(doc.resolve(*v).as_int());
    if (const PdfValue* v = pd->find("BitsPerComponent")) bpc = static_cast<int>(doc.resolve(*v).as_int());
    if (const PdfValue* v = pd->find("Columns")) columns = static_cast<int>(doc.resolve(*v).as_int());
    if (predictor == 1) return out;
    if (predictor >= 10 && predictor <= 15) return apply_png_predictors(out, colors, bpc, columns);
    throw UnsupportedFilter("unsupported predictor " + std::to_string(predictor));
}

}  // namespace trapdoc
