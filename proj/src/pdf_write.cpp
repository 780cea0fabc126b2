#include <charconv>
#include <cstdio>
#include <set>

#include "trapdoc/errors.hpp"
#include "trapdoc/pdf_io.hpp"

namespace trapdoc {

namespace detail {

bool is_pdf_whitespace(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\0';
}

bool is_pdf_delimiter(char c) {
    return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' ||
           c == '{' || c == '}' || c == '/' || c == '%';
}

std::string escape_literal_string(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size() + 2);
    out.push_back('(');
    for (char c : bytes) {
        switch (c) {
            case '(': out += "\\("; break;
            case ')': out += "\\)"; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            default: {
                unsigned char u = static_cast<unsigned char>(c);
                if (u < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\%03o", u);
                    out += buf;
                } else {
                    out.push_back(c);
                }
            }
        }
    }
    out.push_back(')');
    return out;
}

std::string escape_name(std::string_view name) {
    std::string out = "/";
    for (char c : name) {
        unsigned char u = static_cast<unsigned char>(c);
        if (c == '#' || u < 0x21 || u > 0x7e || is_pdf_delimiter(c)) {
            char buf[4];
            std::snprintf(buf, sizeof(buf), "#%02X", u);
            out += buf;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

// Shortest fixed-point decimal that round-trips the value. PDF has no
// exponent notation, so scientific output is not an option.
std::string format_real(double d) {
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*f", prec, d);
        if (std::stod(buf) == d) {
            std::string s(buf);
            while (s.size() > 1 && s.back() == '0') s.pop_back();
            return s;  // keeps the trailing '.' for integral reals
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17f", d);
    return buf;
}

void serialize_value(const PdfValue& v, std::string& out) {
    if (v.is_null()) {
        out += "null";
    } else if (v.is_bool()) {
        out += v.as_bool() ? "true" : "false";
    } else if (v.is_int()) {
        out += std::to_string(v.as_int());
    } else if (v.is_real()) {
        out += format_real(v.as_real());
    } else if (std::holds_alternative<PdfLiteralString>(v.raw())) {
        out += escape_literal_string(v.string_bytes());
    } else if (std::holds_alternative<PdfHexString>(v.raw())) {
        out.push_back('<');
        static const char* hex = "0123456789ABCDEF";
        for (char c : v.string_bytes()) {
            unsigned char u = static_cast<unsigned char>(c);
            out.push_back(hex[u >> 4]);
            out.push_back(hex[u & 0xf]);
        }
        out.push_back('>');
    } else if (v.is_name()) {
        out += escape_name(v.name().value);
    } else if (v.is_array()) {
        out.push_back('[');
        bool first = true;
        for (const PdfValue& e : v.array()) {
            if (!first) out.push_back(' ');
            first = false;
            serialize_value(e, out);
        }
        out.push_back(']');
    } else if (v.is_dict()) {
        out += "<<";
        for (const PdfDictEntry& e : v.dict().entries) {
            out.push_back(' ');
            out += escape_name(e.key);
            out.push_back(' ');
            serialize_value(e.value, out);
        }
        out += " >>";
    } else if (v.is_ref()) {
        out += std::to_string(v.ref().obj) + " " + std::to_string(v.ref().gen) + " R";
    } else {
        throw Error("stream values must be serialized at the object level");
    }
}

}  // namespace detail

std::string write_document(const Document& doc, const WriteOptions& opts) {
    std::string out = "%PDF-" + (doc.version.empty() ? std::string("1.4") : doc.version) + "\n";
    out += "%\xE2\xE3\xCF\xD3\n";

    // verify the trailer's Root resolves
    const PdfValue* root = doc.trailer.find("Root");
    if (!root || !root->is_ref() || !doc.object({root->ref().obj, root->ref().gen}))
        throw UnresolvableReference("trailer /Root does not resolve");

    std::map<int, std::size_t> offsets;
    for (const auto& [id, val] : doc.objects) {
        offsets[id.num] = out.size();
        out += std::to_string(id.num) + " " + std::to_string(id.gen) + " obj\n";
        if (val.is_stream()) {
            const PdfStream& st = val.stream();
            std::string data = st.data;
            PdfDict d = st.dict;
            if (opts.compress_streams && !d.contains("Filter")) {
                data = flate_encode(data);
                d.set("Filter", PdfValue(PdfName{"FlateDecode"}));
            }
            d.set("Length", PdfValue(static_cast<std::int64_t>(data.size())));
            detail::serialize_value(PdfValue(d), out);
            out += "\nstream\n";
            out += data;
            out += "\nendstream";
        } else {
            detail::serialize_value(val, out);
        }
        out += "\nendobj\n";
    }

    int size = doc.max_object_number() + 1;
    std::size_t xref_at = out.size();
    out += "xref\n0 " + std::to_string(size) + "\n";
    out += "0000000000 65535 f \n";
    for (int n = 1; n < size; ++n) {
        char buf[32];
        auto it = offsets.find(n);
        if (it == offsets.end()) {
            out += "0000000000 00000 f \n";
        } else {
            int gen = 0;
            for (const auto& [id, _] : doc.objects)
                if (id.num == n) gen = id.gen;
            std::snprintf(buf, sizeof(buf), "%010zu %05d n \n", it->second, gen);
            out += buf;
        }
    }

    PdfDict trailer = doc.trailer;
    for (const char* k : {"Prev", "XRefStm", "Type", "W", "Index", "Filter",
                          "DecodeParms", "Length", "First", "N"})
        trailer.erase(k);
    trailer.set("Size", PdfValue(static_cast<std::int64_t>(size)));
    out += "trailer\n";
    detail::serialize_value(PdfValue(trailer), out);
    out += "\nstartxref\n" + std::to_string(xref_at) + "\n%%EOF\n";
    return out;
}

}  // namespace trapdoc
