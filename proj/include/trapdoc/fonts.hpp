#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "trapdoc/pdf_value.hpp"

namespace trapdoc {

// Decoding info derived from a font dictionary. Simple fonts map one byte per
// code; composite (Type0, Identity ordering) fonts map two.
struct FontInfo {
    enum class Encoding { StandardRoman, WinAnsi, MacRoman, Custom };

    bool composite = false;
    Encoding base = Encoding::StandardRoman;
    std::map<int, std::string> differences;        // code -> glyph name
    std::map<std::uint32_t, std::string> to_unicode;  // code -> UTF-8

    int code_unit_bytes() const { return composite ? 2 : 1; }
};

FontInfo font_info(const PdfDict& font, const Document& doc);

// Maps shown bytes to text. Unmappable codes become U+FFFD; a trailing
// partial code yields one U+FFFD and sets *warned.
std::string decode_shown_bytes(const FontInfo& font, std::string_view raw,
                               bool* warned = nullptr);

// Adobe glyph name to UTF-8 ("alpha" -> α, "uni0041" -> A). Empty on miss.
std::string glyph_name_to_utf8(std::string_view name);

// Encodes UTF-8 text into WinAnsi bytes; characters outside the encoding
// become '?'. Returns the replacement count via *replaced when non-null.
std::string encode_winansi(std::string_view utf8, int* replaced = nullptr);

std::string codepoint_to_utf8(std::uint32_t cp);

}  // namespace trapdoc
