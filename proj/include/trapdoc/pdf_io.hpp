#pragma once

#include <string>
#include <string_view>

#include "trapdoc/pdf_value.hpp"

namespace trapdoc {

// Parses a complete PDF file. Classic xref tables, xref streams, hybrid
// files (Prev chains, newest section wins) and object streams are handled.
// Encrypted files are rejected.
Document parse_document(std::string_view bytes);

// Fully decodes a stream's payload. Supported: no filter, FlateDecode
// (optionally with PNG predictors 10-15 or predictor 1).
std::string decode_stream(const PdfStream& stream, const Document& doc);

// Raw zlib deflate of a byte sequence (the inverse of FlateDecode without
// predictors).
std::string flate_encode(std::string_view bytes);
std::string flate_decode(std::string_view bytes);

struct WriteOptions {
    // When true, streams that carry no Filter are Flate-compressed on output.
    bool compress_streams = false;
};

// Serializes the document as a single-revision PDF with a classic xref
// table. Stream Lengths and trailer /Size are recomputed.
std::string write_document(const Document& doc, const WriteOptions& opts = {});

// Shared low-level helpers (also used by the content-stream tokenizer).
namespace detail {
bool is_pdf_whitespace(char c);
bool is_pdf_delimiter(char c);
std::string escape_literal_string(std::string_view bytes);
std::string escape_name(std::string_view name);
std::string format_real(double d);
void serialize_value(const PdfValue& v, std::string& out);
}  // namespace detail

}  // namespace trapdoc
