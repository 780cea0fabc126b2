#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_main.hpp"
#include "doctest.h"
#include "trapdoc/extraction.hpp"
#include "trapdoc/pdf_io.hpp"

using namespace trapdoc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("trapdoc_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name, const std::string& content) {
        fs::path p = path / name;
        std::ofstream(p, std::ios::binary) << content;
        return p.string();
    }
    std::string at(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(cli_main({"extract"}) == 1);                       // missing --in
    CHECK(cli_main({"extract", "--nope", "x"}) == 1);        // unknown flag
    CHECK(cli_main({"no-such-subcommand"}) == 1);
    CHECK(cli_main({}) == 1);
}

TEST_CASE("malformed input exits 2") {
    TempDir tmp;
    std::string bad = tmp.file("bad.pdf", "this is not a pdf");
    CHECK(cli_main({"extract", "--in", bad}) == 2);
    CHECK(cli_main({"extract", "--in", tmp.at("missing.pdf")}) == 2);
}

TEST_CASE("render then extract") {
    TempDir tmp;
    std::string txt = tmp.file("doc.txt", "Hello world from the CLI.\n");
    CHECK(cli_main({"render", "--in", txt, "--out", tmp.at("doc.pdf")}) == 0);
    Document doc = parse_document(slurp(tmp.at("doc.pdf")));
    CHECK(extract_text(doc, View::Human) == "Hello world from the CLI.");
}

TEST_CASE("no silent overwrites without --force") {
    TempDir tmp;
    std::string txt = tmp.file("doc.txt", "content\n");
    std::string out = tmp.file("doc.pdf", "preexisting");
    CHECK(cli_main({"render", "--in", txt, "--out", out}) == 1);
    CHECK(slurp(out) == "preexisting");
    CHECK(cli_main({"render", "--in", txt, "--out", out, "--force"}) == 0);
    CHECK(slurp(out) != "preexisting");
}

TEST_CASE("inject requires exactly one payload source") {
    TempDir tmp;
    std::string txt = tmp.file("doc.txt", "some visible text\n");
    REQUIRE(cli_main({"render", "--in", txt, "--out", tmp.at("doc.pdf")}) == 0);
    CHECK(cli_main({"inject", "--in", tmp.at("doc.pdf"), "--out", tmp.at("a.pdf")}) == 1);
    CHECK(cli_main({"inject", "--in", tmp.at("doc.pdf"), "--out", tmp.at("a.pdf"),
                    "--payload-text", "w1 w2", "--payload", txt}) == 1);
    CHECK(cli_main({"inject", "--in", tmp.at("doc.pdf"), "--out", tmp.at("a.pdf"),
                    "--payload-text", "w1 w2", "--report", tmp.at("rep.json")}) == 0);
    Document doc = parse_document(slurp(tmp.at("a.pdf")));
    CHECK(extract_text(doc, View::Human) == "some visible text");
    CHECK(extract_text(doc, View::Stream) != "some visible text");
    CHECK(slurp(tmp.at("rep.json")).find("words_inserted") != std::string::npos);
}

TEST_CASE("perturb subcommand") {
    TempDir tmp;
    std::string in = tmp.file("in.txt", "She can swim.");
    CHECK(cli_main({"perturb", "--method", "negation", "--in", in, "--out",
                    tmp.at("out.txt")}) == 0);
    CHECK(slurp(tmp.at("out.txt")) == "She can not swim.");

    CHECK(cli_main({"perturb", "--method", "attack-s1", "--in", in, "--out",
                    tmp.at("s1.txt")}) == 0);
    CHECK(slurp(tmp.at("s1.txt")) == "She can swim. @fasuv3");

    CHECK(cli_main({"perturb", "--method", "bogus", "--in", in, "--out",
                    tmp.at("x.txt")}) == 1);
}

TEST_CASE("LLM failures exit 3") {
    TempDir tmp;
    std::string in = tmp.file("in.txt", "Facts here.");
    CHECK(cli_main({"perturb", "--method", "hallucination", "--in", in, "--out",
                    tmp.at("h.txt"), "--llm-stub", "fail"}) == 3);
    // no LLM configured at all also surfaces as an LLM-stage failure
    CHECK(cli_main({"perturb", "--method", "hallucination", "--in", in, "--out",
                    tmp.at("h.txt")}) == 3);
}

TEST_CASE("eyesight and inspect") {
    TempDir tmp;
    CHECK(cli_main({"eyesight", "--out", tmp.at("eye.pdf")}) == 0);
    CHECK(cli_main({"inspect", "--in", tmp.at("eye.pdf"), "--report", tmp.at("r.jsonl")}) == 0);
    std::string report = slurp(tmp.at("r.jsonl"));
    CHECK(report.find("size-zero") != std::string::npos);
    CHECK(report.find("alpha-zero") != std::string::npos);
}

TEST_CASE("score subcommand") {
    TempDir tmp;
    std::string a = tmp.file("a.txt", "the cat sat on the mat");
    std::string b = tmp.file("b.txt", "the cat ate the mat");
    CHECK(cli_main({"score", "--candidate", a, "--reference", b}) == 0);
}

TEST_CASE("pipeline end to end with a stubbed LLM") {
    TempDir tmp;
    std::string txt = tmp.file("doc.txt",
                               "Justin Rose is not resting on his laurels. Playing video games "
                               "makes you better.\n");
    REQUIRE(cli_main({"render", "--in", txt, "--out", tmp.at("doc.pdf")}) == 0);

    SUBCASE("negation") {
        CHECK(cli_main({"pipeline", "--in", tmp.at("doc.pdf"), "--out", tmp.at("out.pdf"),
                        "--method", "negation"}) == 0);
        Document before = parse_document(slurp(tmp.at("doc.pdf")));
        Document after = parse_document(slurp(tmp.at("out.pdf")));
        CHECK(extract_text(before, View::Human) == extract_text(after, View::Human));
    }
    SUBCASE("hallucination via echo stub") {
        CHECK(cli_main({"pipeline", "--in", tmp.at("doc.pdf"), "--out", tmp.at("out.pdf"),
                        "--method", "hallucination", "--llm-stub", "echo:[STUB] "}) == 0);
        Document after = parse_document(slurp(tmp.at("out.pdf")));
        CHECK(extract_text(after, View::Stream).find("[STUB]") != std::string::npos);
    }
    SUBCASE("irrelevant needs a corpus") {
        std::string corpus = tmp.file(
            "corpus.json",
            R"([{"id":"me","text":"my own text"},{"id":"other","text":"substitute passage"}])");
        CHECK(cli_main({"pipeline", "--in", tmp.at("doc.pdf"), "--out", tmp.at("out.pdf"),
                        "--method", "irrelevant", "--corpus", corpus, "--id", "me"}) == 0);
        Document after = parse_document(slurp(tmp.at("out.pdf")));
        CHECK(extract_text(after, View::Stream).find("substitute") != std::string::npos);
    }
}
