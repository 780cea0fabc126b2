#pragma once

// Internal: shared tokenizer for file-level objects and content streams.

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "trapdoc/errors.hpp"
#include "trapdoc/pdf_value.hpp"

namespace trapdoc::detail {

inline bool is_pdf_ws(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\0';
}

inline bool is_pdf_delim(char c) {
    return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' ||
           c == '{' || c == '}' || c == '/' || c == '%';
}

inline bool is_regular(char c) { return !is_pdf_ws(c) && !is_pdf_delim(c); }

class Lexer {
public:
    Lexer(std::string_view src, std::size_t pos = 0) : src_(src), pos_(pos) {}

    std::size_t pos() const { return pos_; }
    void seek(std::size_t p) { pos_ = p; }
    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }
    std::string_view src() const { return src_; }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (is_pdf_ws(c)) {
                ++pos_;
            } else if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
            } else {
                break;
            }
        }
    }

    // Bareword token (keyword or operator). Empty when next char is not regular.
    std::string next_keyword() {
        std::string out;
        while (pos_ < src_.size() && is_regular(src_[pos_])) out.push_back(src_[pos_++]);
        return out;
    }

    bool at_keyword(std::string_view kw) const {
        if (src_.compare(pos_, kw.size(), kw) != 0) return false;
        std::size_t end = pos_ + kw.size();
        return end >= src_.size() || !is_regular(src_[end]);
    }

    bool consume_keyword(std::string_view kw) {
        if (!at_keyword(kw)) return false;
        pos_ += kw.size();
        return true;
    }

    // Parses one object. allow_ref enables "N G R" lookahead (off inside
    // content streams where bare integers are operands).
    PdfValue parse_value(bool allow_ref) {
        skip_ws();
        if (eof()) throw Error("unexpected end of input while parsing object");
        char c = peek();
        switch (c) {
            case '/': {
                ++pos_;
                return PdfName{parse_name_token()};
            }
            case '(':
                ++pos_;
                return PdfLiteralString{parse_literal_string()};
            case '<':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '<') return parse_dict_or_stream(allow_ref);
                ++pos_;
                return PdfHexString{parse_hex_string()};
            case '[': {
                ++pos_;
                PdfArray arr;
                for (;;) {
                    skip_ws();
                    if (eof()) throw Error("unterminated array");
                    if (peek() == ']') {
                        ++pos_;
                        break;
                    }
                    arr.push_back(parse_value(allow_ref));
                }
                return arr;
            }
            default:
                break;
        }
        if (c == '+' || c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c)))
            return parse_number_or_ref(allow_ref);
        if (consume_keyword("true")) return PdfValue(true);
        if (consume_keyword("false")) return PdfValue(false);
        if (consume_keyword("null")) return PdfValue(PdfNull{});
        throw Error("unexpected token at offset " + std::to_string(pos_));
    }

    // After the opening '/'.
    std::string parse_name_token() {
        std::string out;
        while (pos_ < src_.size() && is_regular(src_[pos_])) {
            char c = src_[pos_++];
            if (c == '#' && pos_ + 1 < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[pos_])) &&
                std::isxdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                int hi = hex_digit(src_[pos_]);
                int lo = hex_digit(src_[pos_ + 1]);
                out.push_back(static_cast<char>((hi << 4) | lo));
                pos_ += 2;
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    // After the opening '('.
    std::string parse_literal_string() {
        std::string out;
        int depth = 1;
        while (pos_ < src_.size()) {
            char c = src_[pos_++];
            if (c == '\\') {
                if (pos_ >= src_.size()) throw UnbalancedString("backslash at end of string");
                char e = src_[pos_++];
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case 'b': out.push_back('\b'); break;
                    case 'f': out.push_back('\f'); break;
                    case '(': out.push_back('('); break;
                    case ')': out.push_back(')'); break;
                    case '\\': out.push_back('\\'); break;
                    case '\r':
                        if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
                        break;  // line continuation
                    case '\n': break;
                    default:
                        if (e >= '0' && e <= '7') {
                            int v = e - '0';
                            for (int k = 0; k < 2 && pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '7'; ++k)
                                v = v * 8 + (src_[pos_++] - '0');
                            out.push_back(static_cast<char>(v & 0xff));
                        } else {
                            out.push_back(e);  // unknown escape: drop backslash
                        }
                }
            } else if (c == '(') {
                ++depth;
                out.push_back(c);
            } else if (c == ')') {
                if (--depth == 0) return out;
                out.push_back(c);
            } else if (c == '\r') {
                // EOL inside a string reads as LF
                if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
                out.push_back('\n');
            } else {
                out.push_back(c);
            }
        }
        throw UnbalancedString("unterminated literal string");
    }

    // After the opening '<'.
    std::string parse_hex_string() {
        std::string out;
        int hi = -1;
        while (pos_ < src_.size()) {
            char c = src_[pos_++];
            if (c == '>') {
                if (hi >= 0) out.push_back(static_cast<char>(hi << 4));
                return out;
            }
            if (is_pdf_ws(c)) continue;
            if (!std::isxdigit(static_cast<unsigned char>(c)))
                throw UnbalancedString("non-hex character in hex string");
            if (hi < 0) {
                hi = hex_digit(c);
            } else {
                out.push_back(static_cast<char>((hi << 4) | hex_digit(c)));
                hi = -1;
            }
        }
        throw UnbalancedString("unterminated hex string");
    }

    PdfValue parse_number_or_ref(bool allow_ref) {
        std::size_t start = pos_;
        bool real = false;
        if (peek() == '+' || peek() == '-') ++pos_;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.') {
                real = true;
                ++pos_;
            } else {
                break;
            }
        }
        std::string tok(src_.substr(start, pos_ - start));
        if (tok.empty() || tok == "+" || tok == "-" || tok == ".")
            throw Error("malformed number at offset " + std::to_string(start));
        if (real) return PdfValue(std::stod(tok));
        std::int64_t n = std::stoll(tok);
        if (allow_ref && n > 0) {
            std::size_t save = pos_;
            skip_ws();
            std::size_t gstart = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ > gstart) {
                std::string gen(src_.substr(gstart, pos_ - gstart));
                skip_ws();
                if (consume_keyword("R"))
                    return PdfReference{static_cast<int>(n), std::stoi(gen)};
            }
            pos_ = save;
        }
        return PdfValue(n);
    }

    static int hex_digit(char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return c - 'A' + 10;
    }

private:
    PdfValue parse_dict_or_stream(bool allow_ref) {
        pos_ += 2;  // <<
        PdfDict d;
        for (;;) {
            skip_ws();
            if (eof()) throw Error("unterminated dictionary");
            if (peek() == '>') {
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
                    pos_ += 2;
                    break;
                }
                throw Error("stray '>' in dictionary");
            }
            if (peek() != '/') throw Error("dictionary key must be a name, offset " + std::to_string(pos_));
            ++pos_;
            std::string key = parse_name_token();
            PdfValue val = parse_value(allow_ref);
            d.set(std::move(key), std::move(val));
        }
        return d;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace trapdoc::detail
