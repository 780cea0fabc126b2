#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace trapdoc {

class PdfValue;

struct PdfNull {
    bool operator==(const PdfNull&) const = default;
};

struct PdfName {
    std::string value;  // without the leading slash
    bool operator==(const PdfName&) const = default;
    auto operator<=>(const PdfName&) const = default;
};

struct PdfLiteralString {
    std::string bytes;
    bool operator==(const PdfLiteralString&) const = default;
};

struct PdfHexString {
    std::string bytes;
    bool operator==(const PdfHexString&) const = default;
};

struct PdfReference {
    int obj = 0;
    int gen = 0;
    bool operator==(const PdfReference&) const = default;
    auto operator<=>(const PdfReference&) const = default;
};

struct PdfDictEntry;

// Insertion-ordered dictionary with unique keys.
class PdfDict {
public:
    std::vector<PdfDictEntry> entries;

    const PdfValue* find(std::string_view key) const;
    PdfValue* find(std::string_view key);
    void set(std::string key, PdfValue v);
    void erase(std::string_view key);
    bool contains(std::string_view key) const { return find(key) != nullptr; }
    bool operator==(const PdfDict& o) const;
};

struct PdfStream {
    PdfDict dict;
    std::string data;  // raw (possibly encoded) payload
    bool operator==(const PdfStream& o) const;
};

using PdfArray = std::vector<PdfValue>;

class PdfValue {
public:
    using Variant = std::variant<PdfNull, bool, std::int64_t, double, PdfLiteralString,
                                 PdfHexString, PdfName, PdfArray, PdfDict, PdfStream,
                                 PdfReference>;

    PdfValue() : v_(PdfNull{}) {}
    PdfValue(PdfNull n) : v_(n) {}
    PdfValue(bool b) : v_(b) {}
    PdfValue(std::int64_t i) : v_(i) {}
    PdfValue(int i) : v_(static_cast<std::int64_t>(i)) {}
    PdfValue(double d) : v_(d) {}
    PdfValue(PdfLiteralString s) : v_(std::move(s)) {}
    PdfValue(PdfHexString s) : v_(std::move(s)) {}
    PdfValue(PdfName n) : v_(std::move(n)) {}
    PdfValue(PdfArray a) : v_(std::move(a)) {}
    PdfValue(PdfDict d) : v_(std::move(d)) {}
    PdfValue(PdfStream s) : v_(std::move(s)) {}
    PdfValue(PdfReference r) : v_(r) {}

    bool is_null() const { return std::holds_alternative<PdfNull>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
    bool is_real() const { return std::holds_alternative<double>(v_); }
    bool is_number() const { return is_int() || is_real(); }
    bool is_string() const {
        return std::holds_alternative<PdfLiteralString>(v_) ||
               std::holds_alternative<PdfHexString>(v_);
    }
    bool is_name() const { return std::holds_alternative<PdfName>(v_); }
    bool is_array() const { return std::holds_alternative<PdfArray>(v_); }
    bool is_dict() const { return std::holds_alternative<PdfDict>(v_); }
    bool is_stream() const { return std::holds_alternative<PdfStream>(v_); }
    bool is_ref() const { return std::holds_alternative<PdfReference>(v_); }

    bool as_bool() const { return std::get<bool>(v_); }
    std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
    double as_real() const {
        return is_int() ? static_cast<double>(as_int()) : std::get<double>(v_);
    }
    // Bytes of either string flavor.
    const std::string& string_bytes() const;
    const PdfName& name() const { return std::get<PdfName>(v_); }
    const PdfArray& array() const { return std::get<PdfArray>(v_); }
    PdfArray& array() { return std::get<PdfArray>(v_); }
    const PdfDict& dict() const { return std::get<PdfDict>(v_); }
    PdfDict& dict() { return std::get<PdfDict>(v_); }
    const PdfStream& stream() const { return std::get<PdfStream>(v_); }
    PdfStream& stream() { return std::get<PdfStream>(v_); }
    PdfReference ref() const { return std::get<PdfReference>(v_); }

    const Variant& raw() const { return v_; }
    bool operator==(const PdfValue& o) const;

private:
    Variant v_;
};

struct PdfDictEntry {
    std::string key;
    PdfValue value;
    bool operator==(const PdfDictEntry& o) const = default;
};

struct ObjectId {
    int num = 0;
    int gen = 0;
    auto operator<=>(const ObjectId&) const = default;
};

// Parsed PDF object graph.
struct Document {
    std::string version;  // e.g. "1.7"
    std::map<ObjectId, PdfValue> objects;
    PdfDict trailer;
    std::vector<ObjectId> page_order;

    const PdfValue* object(ObjectId id) const;
    // Follows references up to a fixed depth; returns the value itself when
    // the argument is not a reference. Throws CircularReference past the bound.
    const PdfValue& resolve(const PdfValue& v) const;
    int max_object_number() const;
};

}  // namespace trapdoc
