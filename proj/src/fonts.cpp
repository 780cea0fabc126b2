#include "trapdoc/fonts.hpp"

#include <array>
#include <cstdio>

#include "object_lexer.hpp"
#include "trapdoc/errors.hpp"
#include "trapdoc/pdf_io.hpp"

namespace trapdoc {

namespace {

constexpr const char* kReplacement = "\xEF\xBF\xBD";  // U+FFFD

// WinAnsi (CP1252) high range 0x80-0x9F; 0xA0-0xFF is Latin-1.
constexpr std::array<std::uint16_t, 32> kWinAnsiHigh = {
    0x20AC, 0xFFFD, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0xFFFD, 0x017D, 0xFFFD,
    0xFFFD, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0xFFFD, 0x017E, 0x0178};

// MacRoman 0x80-0xFF.
constexpr std::array<std::uint16_t, 128> kMacRomanHigh = {
    0x00C4, 0x00C5, 0x00C7, 0x00C9, 0x00D1, 0x00D6, 0x00DC, 0x00E1,
    0x00E0, 0x00E2, 0x00E4, 0x00E3, 0x00E5, 0x00E7, 0x00E9, 0x00E8,
    0x00EA, 0x00EB, 0x00ED, 0x00EC, 0x00EE, 0x00EF, 0x00F1, 0x00F3,
    0x00F2, 0x00F4, 0x00F6, 0x00F5, 0x00FA, 0x00F9, 0x00FB, 0x00FC,
    0x2020, 0x00B0, 0x00A2, 0x00A3, 0x00A7, 0x2022, 0x00B6, 0x00DF,
    0x00AE, 0x00A9, 0x2122, 0x00B4, 0x00A8, 0x2260, 0x00C6, 0x00D8,
    0x221E, 0x00B1, 0x2264, 0x2265, 0x00A5, 0x00B5, 0x2202, 0x2211,
    0x220F, 0x03C0, 0x222B, 0x00AA, 0x00BA, 0x03A9, 0x00E6, 0x00F8,
    0x00BF, 0x00A1, 0x00AC, 0x221A, 0x0192, 0x2248, 0x2206, 0x00AB,
    0x00BB, 0x2026, 0x00A0, 0x00C0, 0x00C3, 0x00D5, 0x0152, 0x0153,
    0x2013, 0x2014, 0x201C, 0x201D, 0x2018, 0x2019, 0x00F7, 0x25CA,
    0x00FF, 0x0178, 0x2044, 0x20AC, 0x2039, 0x203A, 0xFB01, 0xFB02,
    0x2021, 0x00B7, 0x201A, 0x201E, 0x2030, 0x00C2, 0x00CA, 0x00C1,
    0x00CB, 0x00C8, 0x00CD, 0x00CE, 0x00CF, 0x00CC, 0x00D3, 0x00D4,
    0xF8FF, 0x00D2, 0x00DA, 0x00DB, 0x00D9, 0x0131, 0x02C6, 0x02DC,
    0x00AF, 0x02D8, 0x02D9, 0x02DA, 0x00B8, 0x02DD, 0x02DB, 0x02C7};

struct NamedGlyph {
    const char* name;
    std::uint16_t cp;
};

// Common Adobe Glyph List entries for the punctuation and symbol names the
// standard roman fonts use, plus the Greek lowercase set.
constexpr NamedGlyph kGlyphs[] = {
    {"space", 0x20},       {"exclam", 0x21},     {"quotedbl", 0x22},
    {"numbersign", 0x23},  {"dollar", 0x24},     {"percent", 0x25},
    {"ampersand", 0x26},   {"quotesingle", 0x27},{"parenleft", 0x28},
    {"parenright", 0x29},  {"asterisk", 0x2A},   {"plus", 0x2B},
    {"comma", 0x2C},       {"hyphen", 0x2D},     {"period", 0x2E},
    {"slash", 0x2F},       {"zero", 0x30},       {"one", 0x31},
    {"two", 0x32},         {"three", 0x33},      {"four", 0x34},
    {"five", 0x35},        {"six", 0x36},        {"seven", 0x37},
    {"eight", 0x38},       {"nine", 0x39},       {"colon", 0x3A},
    {"semicolon", 0x3B},   {"less", 0x3C},       {"equal", 0x3D},
    {"greater", 0x3E},     {"question", 0x3F},   {"at", 0x40},
    {"bracketleft", 0x5B}, {"backslash", 0x5C},  {"bracketright", 0x5D},
    {"asciicircum", 0x5E}, {"underscore", 0x5F}, {"grave", 0x60},
    {"braceleft", 0x7B},   {"bar", 0x7C},        {"braceright", 0x7D},
    {"asciitilde", 0x7E},  {"quoteleft", 0x2018},{"quoteright", 0x2019},
    {"quotedblleft", 0x201C}, {"quotedblright", 0x201D}, {"endash", 0x2013},
    {"emdash", 0x2014},    {"bullet", 0x2022},   {"ellipsis", 0x2026},
    {"fi", 0xFB01},        {"fl", 0xFB02},       {"dagger", 0x2020},
    {"daggerdbl", 0x2021}, {"euro", 0x20AC},     {"sterling", 0xA3},
    {"alpha", 0x3B1},      {"beta", 0x3B2},      {"gamma", 0x3B3},
    {"delta", 0x3B4},      {"epsilon", 0x3B5},   {"zeta", 0x3B6},
    {"eta", 0x3B7},        {"theta", 0x3B8},     {"iota", 0x3B9},
    {"kappa", 0x3BA},      {"lambda", 0x3BB},    {"mu", 0x3BC},
    {"nu", 0x3BD},         {"xi", 0x3BE},        {"omicron", 0x3BF},
    {"pi", 0x3C0},         {"rho", 0x3C1},       {"sigma", 0x3C3},
    {"tau", 0x3C4},        {"upsilon", 0x3C5},   {"phi", 0x3C6},
    {"chi", 0x3C7},        {"psi", 0x3C8},       {"omega", 0x3C9},
};

std::string utf16be_to_utf8(std::string_view bytes) {
    std::string out;
    for (std::size_t i = 0; i + 1 < bytes.size(); i += 2) {
        std::uint32_t cp = (static_cast<unsigned char>(bytes[i]) << 8) |
                           static_cast<unsigned char>(bytes[i + 1]);
        if (cp >= 0xD800 && cp <= 0xDBFF && i + 3 < bytes.size()) {
            std::uint32_t lo = (static_cast<unsigned char>(bytes[i + 2]) << 8) |
                               static_cast<unsigned char>(bytes[i + 3]);
            if (lo >= 0xDC00 && lo <= 0xDFFF) {
                cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
                i += 2;
            }
        }
        out += codepoint_to_utf8(cp);
    }
    return out;
}

std::uint32_t hexstr_code(const std::string& bytes) {
    std::uint32_t v = 0;
    for (char c : bytes) v = (v << 8) | static_cast<unsigned char>(c);
    return v;
}

// Minimal CMap reader: bfchar and bfrange sections only.
void parse_tounicode_cmap(std::string_view data, std::map<std::uint32_t, std::string>& out) {
    detail::Lexer lx(data, 0);
    std::vector<PdfValue> stack;
    while (!lx.eof()) {
        lx.skip_ws();
        if (lx.eof()) break;
        char c = lx.peek();
        if (c == '(' || c == '<' || c == '[' || c == '/' || c == '+' || c == '-' ||
            c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
            try {
                stack.push_back(lx.parse_value(false));
            } catch (const Error&) {
                lx.seek(lx.pos() + 1);
            }
            continue;
        }
        std::string kw = lx.next_keyword();
        if (kw.empty()) {
            lx.seek(lx.pos() + 1);
            continue;
        }
        if (kw == "beginbfchar") {
            stack.clear();
            for (;;) {
                lx.skip_ws();
                if (lx.eof() || lx.consume_keyword("endbfchar")) break;
                PdfValue src = lx.parse_value(false);
                PdfValue dst = lx.parse_value(false);
                if (src.is_string() && dst.is_string())
                    out[hexstr_code(src.string_bytes())] = utf16be_to_utf8(dst.string_bytes());
            }
        } else if (kw == "beginbfrange") {
            stack.clear();
            for (;;) {
                lx.skip_ws();
                if (lx.eof() || lx.consume_keyword("endbfrange")) break;
                PdfValue lo = lx.parse_value(false);
                PdfValue hi = lx.parse_value(false);
                PdfValue dst = lx.parse_value(false);
                if (!lo.is_string() || !hi.is_string()) continue;
                std::uint32_t a = hexstr_code(lo.string_bytes());
                std::uint32_t b = hexstr_code(hi.string_bytes());
                if (b - a > 65535) continue;
                if (dst.is_array()) {
                    const PdfArray& arr = dst.array();
                    for (std::uint32_t k = a; k <= b && k - a < arr.size(); ++k)
                        if (arr[k - a].is_string())
                            out[k] = utf16be_to_utf8(arr[k - a].string_bytes());
                } else if (dst.is_string()) {
                    std::string base = dst.string_bytes();
                    for (std::uint32_t k = a; k <= b; ++k) {
                        std::string d = base;
                        if (d.size() >= 2) {
                            std::uint32_t last = hexstr_code(d) + (k - a);
                            // re-encode the incremented final code unit
                            d[d.size() - 2] = static_cast<char>((last >> 8) & 0xff);
                            d[d.size() - 1] = static_cast<char>(last & 0xff);
                        }
                        out[k] = utf16be_to_utf8(d);
                    }
                }
            }
        } else {
            stack.clear();
        }
    }
}

std::uint32_t simple_code_to_cp(const FontInfo& f, int code) {
    if (code >= 0x20 && code <= 0x7E) return static_cast<std::uint32_t>(code);
    switch (f.base) {
        case FontInfo::Encoding::WinAnsi:
            if (code >= 0x80 && code <= 0x9F) return kWinAnsiHigh[code - 0x80];
            if (code >= 0xA0 && code <= 0xFF) return static_cast<std::uint32_t>(code);
            break;
        case FontInfo::Encoding::MacRoman:
            if (code >= 0x80 && code <= 0xFF) return kMacRomanHigh[code - 0x80];
            break;
        default:
            break;
    }
    return 0xFFFD;
}

}  // namespace

std::string codepoint_to_utf8(std::uint32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
}

std::string glyph_name_to_utf8(std::string_view name) {
    if (name.size() == 1) return std::string(name);  // A..Z a..z etc.
    for (const NamedGlyph& g : kGlyphs)
        if (name == g.name) return codepoint_to_utf8(g.cp);
    if (name.size() == 7 && name.substr(0, 3) == "uni") {
        std::uint32_t cp = 0;
        for (char c : name.substr(3)) {
            if (!std::isxdigit(static_cast<unsigned char>(c))) return {};
            cp = (cp << 4) | static_cast<std::uint32_t>(detail::Lexer::hex_digit(c));
        }
        return codepoint_to_utf8(cp);
    }
    return {};
}

FontInfo font_info(const PdfDict& font, const Document& doc) {
    FontInfo info;
    const PdfValue* subtype = font.find("Subtype");
    if (subtype) {
        const PdfValue& st = doc.resolve(*subtype);
        if (st.is_name() && st.name().value == "Type0") info.composite = true;
    }
    if (const PdfValue* enc = font.find("Encoding")) {
        const PdfValue& e = doc.resolve(*enc);
        auto base_from_name = [&](const std::string& n) {
            if (n == "WinAnsiEncoding") info.base = FontInfo::Encoding::WinAnsi;
            else if (n == "MacRomanEncoding") info.base = FontInfo::Encoding::MacRoman;
            else info.base = FontInfo::Encoding::StandardRoman;
        };
        if (e.is_name()) {
            base_from_name(e.name().value);
        } else if (e.is_dict()) {
            if (const PdfValue* be = e.dict().find("BaseEncoding")) {
                const PdfValue& b = doc.resolve(*be);
                if (b.is_name()) base_from_name(b.name().value);
            }
            if (const PdfValue* diff = e.dict().find("Differences")) {
                const PdfValue& d = doc.resolve(*diff);
                if (d.is_array()) {
                    info.base = info.base == FontInfo::Encoding::StandardRoman
                                    ? FontInfo::Encoding::Custom
                                    : info.base;
                    int code = 0;
                    for (const PdfValue& item : d.array()) {
                        if (item.is_int()) code = static_cast<int>(item.as_int());
                        else if (item.is_name()) info.differences[code++] = item.name().value;
                    }
                }
            }
        }
    }
    if (const PdfValue* tu = font.find("ToUnicode")) {
        const PdfValue& t = doc.resolve(*tu);
        if (t.is_stream()) {
            try {
                parse_tounicode_cmap(decode_stream(t.stream(), doc), info.to_unicode);
            } catch (const Error&) {
                // unreadable CMap: fall back to the encoding tables
            }
        }
    }
    return info;
}

std::string decode_shown_bytes(const FontInfo& font, std::string_view raw, bool* warned) {
    std::string out;
    int unit = font.code_unit_bytes();
    std::size_t i = 0;
    for (; i + unit <= raw.size(); i += unit) {
        std::uint32_t code = static_cast<unsigned char>(raw[i]);
        if (unit == 2) code = (code << 8) | static_cast<unsigned char>(raw[i + 1]);
        if (auto it = font.to_unicode.find(code); it != font.to_unicode.end()) {
            out += it->second;
            continue;
        }
        if (font.composite) {
            out += kReplacement;
            continue;
        }
        if (auto it = font.differences.find(static_cast<int>(code)); it != font.differences.end()) {
            std::string g = glyph_name_to_utf8(it->second);
            out += g.empty() ? kReplacement : g;
            continue;
        }
        out += codepoint_to_utf8(simple_code_to_cp(font, static_cast<int>(code)));
    }
    if (i < raw.size()) {
        out += kReplacement;
        if (warned) *warned = true;
    }
    return out;
}

std::string encode_winansi(std::string_view utf8, int* replaced) {
    std::string out;
    int missed = 0;
    std::size_t i = 0;
    while (i < utf8.size()) {
        unsigned char c = static_cast<unsigned char>(utf8[i]);
        std::uint32_t cp;
        int len;
        if (c < 0x80) {
            cp = c;
            len = 1;
        } else if ((c & 0xE0) == 0xC0) {
            cp = c & 0x1F;
            len = 2;
        } else if ((c & 0xF0) == 0xE0) {
            cp = c & 0x0F;
            len = 3;
        } else {
            cp = c & 0x07;
            len = 4;
        }
        if (i + len > utf8.size()) len = 1, cp = '?';
        for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(utf8[i + k]) & 0x3F);
        i += len;

        if (cp >= 0x20 && cp <= 0x7E) {
            out.push_back(static_cast<char>(cp));
        } else if (cp >= 0xA0 && cp <= 0xFF) {
            out.push_back(static_cast<char>(cp));
        } else {
            bool found = false;
            for (int code = 0x80; code <= 0x9F; ++code) {
                if (kWinAnsiHigh[code - 0x80] == cp) {
                    out.push_back(static_cast<char>(code));
                    found = true;
                    break;
                }
            }
            if (!found) {
                out.push_back('?');
                ++missed;
            }
        }
    }
    if (replaced) *replaced = missed;
    return out;
}

}  // namespace trapdoc
