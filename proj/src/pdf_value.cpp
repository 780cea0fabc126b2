#include "trapdoc/pdf_value.hpp"

#include <algorithm>

#include "trapdoc/errors.hpp"

namespace trapdoc {

const PdfValue* PdfDict::find(std::string_view key) const {
    for (const auto& e : entries)
        if (e.key == key) return &e.value;
    return nullptr;
}

PdfValue* PdfDict::find(std::string_view key) {
    for (auto& e : entries)
        if (e.key == key) return &e.value;
    return nullptr;
}

void PdfDict::set(std::string key, PdfValue v) {
    for (auto& e : entries) {
        if (e.key == key) {
            e.value = std::move(v);
            return;
        }
    }
    entries.push_back(PdfDictEntry{std::move(key), std::move(v)});
}

void PdfDict::erase(std::string_view key) {
    entries.erase(std::remove_if(entries.begin(), entries.end(),
                                 [&](const PdfDictEntry& e) { return e.key == key; }),
                  entries.end());
}

bool PdfDict::operator==(const PdfDict& o) const { return entries == o.entries; }

bool PdfStream::operator==(const PdfStream& o) const {
    return dict == o.dict && data == o.data;
}

const std::string& PdfValue::string_bytes() const {
    if (auto* s = std::get_if<PdfLiteralString>(&v_)) return s->bytes;
    return std::get<PdfHexString>(v_).bytes;
}

bool PdfValue::operator==(const PdfValue& o) const { return v_ == o.v_; }

const PdfValue* Document::object(ObjectId id) const {
    auto it = objects.find(id);
    return it == objects.end() ? nullptr : &it->second;
}

const PdfValue& Document::resolve(const PdfValue& v) const {
    static const PdfValue null_value{};
    const PdfValue* cur = &v;
    for (int depth = 0; depth < 32; ++depth) {
        if (!cur->is_ref()) return *cur;
        const PdfValue* next = object({cur->ref().obj, cur->ref().gen});
        if (!next) return null_value;
        cur = next;
    }
    throw CircularReference("reference chain longer than 32");
}

int Document::max_object_number() const {
    int m = 0;
    for (const auto& [id, _] : objects) m = std::max(m, id.num);
    return m;
}

}  // namespace trapdoc
