#include "doctest.h"
#include "trapdoc/content_stream.hpp"
#include "trapdoc/errors.hpp"

using namespace trapdoc;

namespace {

PdfDict simple_resources() {
    PdfDict font;
    font.set("Type", PdfName{"Font"});
    font.set("Subtype", PdfName{"Type1"});
    font.set("BaseFont", PdfName{"Helvetica"});
    PdfDict fonts;
    fonts.set("F1", PdfValue(std::move(font)));
    PdfDict res;
    res.set("Font", PdfValue(std::move(fonts)));
    return res;
}

}  // namespace

TEST_CASE("operator and operand tokenization") {
    auto ops = parse_content("1 0 0 1 72 720 cm BT /F1 12 Tf (Hi) Tj ET true false null n");
    REQUIRE(ops.size() == 6);
    CHECK(ops[0].op == "cm");
    CHECK(ops[0].operands.size() == 6);
    CHECK(ops[2].op == "Tf");
    CHECK(ops[2].operands[0].name().value == "F1");
    CHECK(ops[3].operands[0].string_bytes() == "Hi");
    CHECK(ops[5].op == "n");
    CHECK(ops[5].operands.size() == 3);  // true false null are operands
    CHECK(ops[5].operands[0].as_bool());
}

TEST_CASE("nested parens and escapes in strings") {
    auto ops = parse_content("(a (nested) b) Tj");
    CHECK(ops[0].operands[0].string_bytes() == "a (nested) b");
    auto esc = parse_content("(line\\nbreak \\050x\\051) Tj");
    CHECK(esc[0].operands[0].string_bytes() == "line\nbreak (x)");
}

TEST_CASE("TJ arrays carry strings and kerns") {
    auto ops = parse_content("[(A) -120 (B)] TJ");
    REQUIRE(ops.size() == 1);
    const PdfArray& a = ops[0].operands[0].array();
    REQUIRE(a.size() == 3);
    CHECK(a[0].string_bytes() == "A");
    CHECK(a[1].as_int() == -120);
}

TEST_CASE("inline images are opaque and round trip") {
    std::string src = "q BI /W 2 /H 2 /BPC 8 /CS /G ID \x01\x02)whatever EI Q";
    auto ops = parse_content(src);
    REQUIRE(ops.size() == 3);
    CHECK(ops[1].op == "BI");
    CHECK(!ops[1].raw_inline.empty());
    auto again = parse_content(serialize_content(ops));
    CHECK(again == ops);
}

TEST_CASE("malformed streams throw") {
    CHECK_THROWS_AS(parse_content("(never closed"), UnbalancedString);
    CHECK_THROWS_AS(parse_content("1 2 3"), DanglingOperands);
    CHECK_THROWS_AS(parse_content("BI /W 2 ID data-without-ei"), UnterminatedInlineImage);
}

TEST_CASE("serialize -> parse identity") {
    std::string src =
        "q 0.5 g BT /F1 10.5 Tf 1 Tr 2 Tc (x\\\\y) Tj [(a) 3 (b)] TJ T* (z) ' 1 2 (w) \" ET Q";
    auto ops = parse_content(src);
    auto round = parse_content(serialize_content(ops));
    CHECK(round == ops);
}

TEST_CASE("text state machine") {
    PdfDict res = simple_resources();
    Document doc;

    SUBCASE("Tf Tc Tw Tz TL Ts Tr are tracked") {
        auto ops = parse_content(
            "BT /F1 11 Tf 1 Tc 2 Tw 50 Tz 14 TL 3 Ts 3 Tr (A) Tj ET");
        auto runs = scan_text_runs(ops, res, doc);
        REQUIRE(runs.size() == 1);
        CHECK(runs[0].raw == "A");
        CHECK(runs[0].state.font_size == doctest::Approx(11));
        CHECK(runs[0].state.char_spacing == doctest::Approx(1));
        CHECK(runs[0].state.word_spacing == doctest::Approx(2));
        CHECK(runs[0].state.horiz_scale == doctest::Approx(50));
        CHECK(runs[0].state.leading == doctest::Approx(14));
        CHECK(runs[0].state.rise == doctest::Approx(3));
        CHECK(runs[0].state.render_mode == 3);
        CHECK(!runs[0].missing_font);
    }

    SUBCASE("BT resets parameters but the font survives") {
        auto ops = parse_content("BT /F1 9 Tf 5 Tc (A) Tj ET BT (B) Tj ET");
        auto runs = scan_text_runs(ops, res, doc);
        REQUIRE(runs.size() == 2);
        CHECK(runs[1].state.font_size == doctest::Approx(9));
        CHECK(runs[1].state.char_spacing == doctest::Approx(0));
    }

    SUBCASE("q/Q save and restore") {
        auto ops = parse_content("0.2 g q 0.9 g BT /F1 8 Tf (A) Tj ET Q BT /F1 8 Tf (B) Tj ET");
        auto runs = scan_text_runs(ops, res, doc);
        REQUIRE(runs.size() == 2);
        CHECK(runs[0].state.fill_gray == doctest::Approx(0.9));
        CHECK(runs[1].state.fill_gray == doctest::Approx(0.2));
    }

    SUBCASE("rg clears the gray channel") {
        auto ops = parse_content("1 g 1 1 1 rg BT /F1 8 Tf (A) Tj ET");
        auto runs = scan_text_runs(ops, res, doc);
        REQUIRE(runs.size() == 1);
        CHECK(!runs[0].state.fill_gray.has_value());
    }

    SUBCASE("gs pulls fill alpha from ExtGState") {
        PdfDict gs;
        gs.set("ca", PdfValue(0.25));
        PdfDict ext;
        ext.set("G1", PdfValue(std::move(gs)));
        PdfDict res2 = simple_resources();
        res2.set("ExtGState", PdfValue(std::move(ext)));
        auto ops = parse_content("/G1 gs BT /F1 8 Tf (A) Tj ET");
        auto runs = scan_text_runs(ops, res2, doc);
        REQUIRE(runs.size() == 1);
        CHECK(runs[0].state.fill_alpha == doctest::Approx(0.25));
    }

    SUBCASE("quote operators show text") {
        auto ops = parse_content("BT /F1 8 Tf (a) ' 4 5 (b) \" ET");
        auto runs = scan_text_runs(ops, res, doc);
        REQUIRE(runs.size() == 2);
        CHECK(runs[0].raw == "a");
        CHECK(runs[1].raw == "b");
        CHECK(runs[1].state.word_spacing == doctest::Approx(4));
        CHECK(runs[1].state.char_spacing == doctest::Approx(5));
    }

    SUBCASE("missing font is flagged") {
        auto ops = parse_content("BT /Nope 8 Tf (A) Tj ET");
        auto runs = scan_text_runs(ops, res, doc);
        REQUIRE(runs.size() == 1);
        CHECK(runs[0].missing_font);
    }

    SUBCASE("marked-content spans tag runs; outermost wins") {
        auto ops = parse_content(
            "BT /F1 8 Tf /SplitRun BMC (a) Tj /SplitRun BMC (b) Tj EMC EMC (c) Tj ET");
        auto runs = scan_text_runs(ops, simple_resources(), doc);
        REQUIRE(runs.size() == 3);
        CHECK(runs[0].span_id >= 0);
        CHECK(runs[1].span_id == runs[0].span_id);  // outermost span applies
        CHECK(runs[2].span_id == -1);
    }
}
