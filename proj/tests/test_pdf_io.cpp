#include <string>

#include "doctest.h"
#include "trapdoc/errors.hpp"
#include "trapdoc/extraction.hpp"
#include "trapdoc/eyesight.hpp"
#include "trapdoc/pdf_io.hpp"

using namespace trapdoc;

namespace {

// Assembles a classic-xref file from numbered object bodies.
std::string classic_pdf(const std::vector<std::string>& bodies, const std::string& trailer_extra,
                        const std::string& version = "1.7") {
    std::string out = "%PDF-" + version + "\n";
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        offsets.push_back(out.size());
        out += std::to_string(i + 1) + " 0 obj\n" + bodies[i] + "\nendobj\n";
    }
    std::size_t xref_at = out.size();
    out += "xref\n0 " + std::to_string(bodies.size() + 1) + "\n";
    out += "0000000000 65535 f \n";
    for (std::size_t off : offsets) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%010zu 00000 n \n", off);
        out += buf;
    }
    out += "trailer\n<< /Size " + std::to_string(bodies.size() + 1) + " /Root 1 0 R" +
           trailer_extra + " >>\nstartxref\n" + std::to_string(xref_at) + "\n%%EOF\n";
    return out;
}

std::vector<std::string> hello_bodies(const std::string& content) {
    return {
        "<< /Type /Catalog /Pages 2 0 R >>",
        "<< /Type /Pages /Kids [3 0 R] /Count 1 >>",
        "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Resources << /Font << /F1 "
        "4 0 R >> >> /Contents 5 0 R >>",
        "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>",
        "<< /Length " + std::to_string(content.size()) + " >>\nstream\n" + content +
            "\nendstream",
    };
}

}  // namespace

TEST_CASE("parses a minimal classic-xref file") {
    std::string pdf = classic_pdf(hello_bodies("BT /F1 12 Tf (Hello world) Tj ET"), "");
    Document doc = parse_document(pdf);
    CHECK(doc.version == "1.7");
    CHECK(doc.page_order.size() == 1);
    CHECK(extract_text(doc, View::Stream) == "Hello world");
}

TEST_CASE("header may be preceded by junk within the first kilobyte") {
    std::string pdf = "garbage prefix\n" + classic_pdf(hello_bodies("BT (x) Tj ET"), "");
    // offsets are now wrong relative to file start; the parser rebases on the header
    CHECK(parse_document(pdf).page_order.size() == 1);
}

TEST_CASE("missing header and missing startxref are rejected") {
    CHECK_THROWS_AS(parse_document("not a pdf at all"), MalformedHeader);
    CHECK_THROWS_AS(parse_document("%PDF-1.4\nnothing else"), XrefNotFound);
}

TEST_CASE("encrypted documents are rejected") {
    std::string pdf =
        classic_pdf(hello_bodies("BT (x) Tj ET"), " /Encrypt << /Filter /Standard >>");
    CHECK_THROWS_AS(parse_document(pdf), UnsupportedEncryption);
}

TEST_CASE("literal string escapes") {
    // control-code escapes decode at the token level; see the content-stream
    // tests. Here only printable escapes survive font decoding.
    std::string content = "BT (a\\(b\\) \\\\ \\101 \\\nz) Tj ET";
    Document doc = parse_document(classic_pdf(hello_bodies(content), ""));
    CHECK(extract_text(doc, View::Stream) == "a(b) \\ A z");
}

TEST_CASE("hex strings pad an odd final digit with zero") {
    Document doc = parse_document(classic_pdf(hello_bodies("BT <48656C6C6F2> Tj ET"), ""));
    CHECK(extract_text(doc, View::Stream) == "Hello ");
}

TEST_CASE("names with hash escapes") {
    std::string pdf = classic_pdf(
        {"<< /Type /Catalog /Pages 2 0 R /A#42 (v) >>", "<< /Type /Pages /Kids [] /Count 0 >>"},
        "");
    Document doc = parse_document(pdf);
    const PdfValue* cat = doc.object({1, 0});
    REQUIRE(cat);
    CHECK(cat->dict().contains("AB"));
}

TEST_CASE("indirect stream Length is resolved") {
    std::string content = "BT (len) Tj ET";
    std::vector<std::string> bodies = hello_bodies(content);
    bodies[4] = "<< /Length 6 0 R >>\nstream\n" + content + "\nendstream";
    bodies.push_back(std::to_string(content.size()));
    Document doc = parse_document(classic_pdf(bodies, ""));
    CHECK(extract_text(doc, View::Stream) == "len");
}

TEST_CASE("flate round trip") {
    std::string data(10000, 'a');
    for (std::size_t i = 0; i < data.size(); i += 7) data[i] = static_cast<char>('b' + i % 20);
    CHECK(flate_decode(flate_encode(data)) == data);
    CHECK_THROWS_AS(flate_decode("not zlib"), CorruptStream);
}

TEST_CASE("decode_stream applies FlateDecode and PNG predictors") {
    Document doc;
    SUBCASE("plain flate") {
        PdfStream s;
        s.dict.set("Filter", PdfName{"FlateDecode"});
        s.data = flate_encode("payload bytes");
        CHECK(decode_stream(s, doc) == "payload bytes");
    }
    SUBCASE("predictor 12 (Up)") {
        // rows [1 2 3 4] and [1 2 3 4]; Up filter makes the second row zeros
        std::string pre = {2, 1, 2, 3, 4, 2, 0, 0, 0, 0};
        PdfStream s;
        s.dict.set("Filter", PdfName{"FlateDecode"});
        PdfDict parms;
        parms.set("Predictor", PdfValue(12));
        parms.set("Columns", PdfValue(4));
        s.dict.set("DecodeParms", PdfValue(std::move(parms)));
        s.data = flate_encode(pre);
        std::string want = {1, 2, 3, 4, 1, 2, 3, 4};
        CHECK(decode_stream(s, doc) == want);
    }
    SUBCASE("unsupported filter") {
        PdfStream s;
        s.dict.set("Filter", PdfName{"DCTDecode"});
        CHECK_THROWS_AS(decode_stream(s, doc), UnsupportedFilter);
    }
}

TEST_CASE("xref streams and object streams") {
    // object 6 (the resources dict) lives inside object stream 5
    std::string out = "%PDF-1.5\n";
    std::vector<std::size_t> off(9, 0);
    auto put = [&](int num, const std::string& body) {
        off[num] = out.size();
        out += std::to_string(num) + " 0 obj\n" + body + "\nendobj\n";
    };
    put(1, "<< /Type /Catalog /Pages 2 0 R >>");
    put(2, "<< /Type /Pages /Kids [3 0 R] /Count 1 >>");
    put(3,
        "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Resources 6 0 R /Contents 4 0 "
        "R >>");
    std::string content = "BT /F1 9 Tf (ObjStm works) Tj ET";
    put(4, "<< /Length " + std::to_string(content.size()) + " >>\nstream\n" + content +
               "\nendstream");
    std::string inner = "<< /Font << /F1 7 0 R >> >>";
    std::string stm_data = "6 0 " + inner;
    put(5, "<< /Type /ObjStm /N 1 /First 4 /Length " + std::to_string(stm_data.size()) +
               " >>\nstream\n" + stm_data + "\nendstream");
    put(7, "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>");

    // xref stream, W [1 4 2], entries 0..8
    std::string entries;
    auto entry = [&](int type, std::size_t f2, int f3) {
        entries.push_back(static_cast<char>(type));
        for (int shift = 24; shift >= 0; shift -= 8)
            entries.push_back(static_cast<char>((f2 >> shift) & 0xff));
        entries.push_back(static_cast<char>((f3 >> 8) & 0xff));
        entries.push_back(static_cast<char>(f3 & 0xff));
    };
    entry(0, 0, 65535);
    for (int n = 1; n <= 5; ++n) entry(1, off[n], 0);
    entry(2, 5, 0);  // object 6: inside stream 5, index 0
    entry(1, off[7], 0);
    std::size_t xref_at = out.size();
    std::string xref_body = entries;
    out += "8 0 obj\n<< /Type /XRef /Size 9 /Root 1 0 R /W [1 4 2] /Index [0 8] /Length " +
           std::to_string(xref_body.size()) + " >>\nstream\n" + xref_body + "\nendstream\nendobj\n";
    // note: entry for object 8 itself is omitted from Index [0 8); acceptable since
    // nothing references it
    out += "startxref\n" + std::to_string(xref_at) + "\n%%EOF\n";

    Document doc = parse_document(out);
    CHECK(extract_text(doc, View::Stream) == "ObjStm works");
    const PdfValue* res = doc.object({6, 0});
    REQUIRE(res);
    CHECK(res->dict().contains("Font"));
}

TEST_CASE("write -> parse structural identity") {
    Document doc = build_text_pdf({"Alpha beta gamma delta.", "Second paragraph."});
    std::string once = write_document(doc);
    Document re = parse_document(once);
    CHECK(write_document(re) == once);
    CHECK(re.page_order.size() == doc.page_order.size());
    CHECK(extract_text(re, View::Stream) == extract_text(doc, View::Stream));
}

TEST_CASE("write with compression still extracts") {
    Document doc = build_text_pdf({"Compress me please, repeatedly. Compress me please."});
    WriteOptions opts;
    opts.compress_streams = true;
    std::string bytes = write_document(doc, opts);
    Document re = parse_document(bytes);
    CHECK(extract_text(re, View::Stream) == extract_text(doc, View::Stream));
}

TEST_CASE("write rejects an unresolvable Root") {
    Document doc;
    doc.trailer.set("Root", PdfValue(PdfReference{42, 0}));
    CHECK_THROWS_AS(write_document(doc), UnresolvableReference);
}

TEST_CASE("format_real round trips without exponent notation") {
    CHECK(detail::format_real(0.5) == "0.5");
    CHECK(detail::format_real(-1.25) == "-1.25");
    CHECK(detail::format_real(1e-7).find('e') == std::string::npos);
    CHECK(detail::format_real(123456789.0).find('e') == std::string::npos);
}

TEST_CASE("resolve follows references and rejects cycles") {
    Document doc;
    doc.objects[{1, 0}] = PdfValue(PdfReference{2, 0});
    doc.objects[{2, 0}] = PdfValue(PdfReference{1, 0});
    doc.objects[{3, 0}] = PdfValue(std::int64_t{7});
    CHECK(doc.resolve(PdfValue(PdfReference{3, 0})).as_int() == 7);
    CHECK_THROWS_AS(doc.resolve(PdfValue(PdfReference{1, 0})), CircularReference);
}
