// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Everything here is deterministic and offline.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "cli_main.hpp"
#include "trapdoc/extraction.hpp"
#include "trapdoc/eyesight.hpp"
#include "trapdoc/inject.hpp"
#include "trapdoc/metrics.hpp"
#include "trapdoc/pdf_io.hpp"
#include "trapdoc/perturb.hpp"

using namespace trapdoc;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
    std::printf("criterion %2d %-24s %s  %s\n", criterion, name.c_str(),
                ok ? "PASS" : "FAIL", detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool is_char_subsequence(const std::string& needle, const std::string& hay) {
    std::size_t i = 0;
    for (std::size_t j = 0; i < needle.size() && j < hay.size(); ++j)
        if (needle[i] == hay[j]) ++i;
    return i == needle.size();
}

// ---- deterministic fixture corpus ------------------------------------------

const std::vector<std::string>& word_bank() {
    static const std::vector<std::string> words = {
        "report",  "climate",  "engine",   "players",  "stadium", "network",  "quietly",
        "system",  "results",  "gardens",  "economy",  "village", "measure",  "fashion",
        "drivers", "science",  "deciding", "pattern",  "crowded", "justice",  "freedom",
        "harbor",  "singing",  "council",  "funding",  "mission", "teacher",  "student",
        "winter",  "summer",   "victory",  "defeat",   "museum",  "journey",  "market"};
    return words;
}

std::string make_paragraph(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> sentence_count(4, 7);
    std::uniform_int_distribution<int> word_count(6, 12);
    std::uniform_int_distribution<std::size_t> pick(0, word_bank().size() - 1);
    std::uniform_int_distribution<int> punct(0, 9);
    std::string out;
    int sentences = sentence_count(rng);
    for (int s = 0; s < sentences; ++s) {
        int n = word_count(rng);
        for (int w = 0; w < n; ++w) {
            std::string word = word_bank()[pick(rng)];
            if (w == 0) word[0] = static_cast<char>(std::toupper(word[0]));
            if (!out.empty()) out += ' ';
            out += word;
        }
        int p = punct(rng);
        out += p < 7 ? "." : (p < 9 ? "?" : "!");
    }
    return out;
}

struct Fixture {
    std::string id;
    std::string text;
    Document doc;
};

std::vector<Fixture> make_fixtures() {
    std::mt19937_64 rng(20260823);
    std::vector<Fixture> out;
    for (int i = 0; i < 20; ++i) {
        Fixture f;
        f.id = "fixture" + std::to_string(i);
        f.text = make_paragraph(rng);
        if (i % 3 == 0) f.text += "\n" + make_paragraph(rng);
        std::vector<std::string> paragraphs;
        std::istringstream in(f.text);
        for (std::string line; std::getline(in, line);) paragraphs.push_back(line);
        f.doc = build_text_pdf(paragraphs);
        out.push_back(std::move(f));
    }
    return out;
}

std::string payload_for(const Fixture& f, int method, const std::vector<CorpusEntry>& corpus) {
    switch (method) {
        case 0: return gen_irrelevant(corpus, f.id, 7);
        case 1: return gen_meta_instruction(extract_text(f.doc, View::Human));
        case 2: return negate_paragraph(extract_text(f.doc, View::Human));
        default: {
            LlmConfig cfg;
            cfg.stub = StubEchoWithMarker{"[REWRITTEN] "};
            return gen_hallucination(extract_text(f.doc, View::Human), cfg);
        }
    }
}

// minimal one-string document for the interleaving oracle
Document single_string_doc(const std::string& text) {
    Document doc;
    doc.version = "1.7";
    PdfDict font;
    font.set("Type", PdfName{"Font"});
    font.set("Subtype", PdfName{"Type1"});
    font.set("BaseFont", PdfName{"Helvetica"});
    font.set("Encoding", PdfName{"WinAnsiEncoding"});
    doc.objects[{3, 0}] = PdfValue(std::move(font));
    PdfStream cs;
    cs.data = "BT /F1 10 Tf " + detail::escape_literal_string(text) + " Tj ET";
    doc.objects[{4, 0}] = PdfValue(std::move(cs));
    PdfDict fonts;
    fonts.set("F1", PdfValue(PdfReference{3, 0}));
    PdfDict res;
    res.set("Font", PdfValue(std::move(fonts)));
    PdfDict page;
    page.set("Type", PdfName{"Page"});
    page.set("Parent", PdfValue(PdfReference{2, 0}));
    page.set("MediaBox", PdfValue(PdfArray{PdfValue(0), PdfValue(0), PdfValue(612), PdfValue(792)}));
    page.set("Resources", PdfValue(std::move(res)));
    page.set("Contents", PdfValue(PdfReference{4, 0}));
    doc.objects[{5, 0}] = PdfValue(std::move(page));
    doc.page_order.push_back({5, 0});
    PdfDict pages;
    pages.set("Type", PdfName{"Pages"});
    pages.set("Kids", PdfValue(PdfArray{PdfValue(PdfReference{5, 0})}));
    pages.set("Count", PdfValue(1));
    doc.objects[{2, 0}] = PdfValue(std::move(pages));
    PdfDict cat;
    cat.set("Type", PdfName{"Catalog"});
    cat.set("Pages", PdfValue(PdfReference{2, 0}));
    doc.objects[{1, 0}] = PdfValue(std::move(cat));
    doc.trailer.set("Root", PdfValue(PdfReference{1, 0}));
    return doc;
}

// independent split-then-zip interleaver (the brute-force oracle)
std::string oracle_interleave(const std::string& text, const std::vector<std::string>& words,
                              int n) {
    std::vector<std::string> segs;
    for (std::size_t at = 0; at < text.size(); at += n)
        segs.push_back(text.substr(at, n));
    std::vector<std::string> parts;
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        parts.push_back(segs[i]);
        if (i + 1 < segs.size()) parts.push_back(words[cursor++ % words.size()]);
    }
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ' ';
        out += parts[i];
    }
    return out;
}

struct TempPath {
    std::filesystem::path dir;
    TempPath() {
        dir = std::filesystem::temp_directory_path() /
              ("trapdoc_acceptance_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir);
    }
    ~TempPath() { std::filesystem::remove_all(dir); }
    std::string at(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

int main() {
    const char* method_names[] = {"irrelevant", "meta", "negation", "hallucination"};

    // criteria 1-3 share the 80-case corpus run
    auto t0 = Clock::now();
    std::vector<Fixture> fixtures = make_fixtures();
    std::vector<CorpusEntry> corpus;
    for (const Fixture& f : fixtures) corpus.push_back({f.id, f.text});

    int imperceptible = 0, supersequence = 0, presence = 0, cases = 0;
    for (const Fixture& f : fixtures) {
        std::string human_before = extract_text(f.doc, View::Human);
        std::string stream_before = extract_text(f.doc, View::Stream);
        for (int m = 0; m < 4; ++m) {
            ++cases;
            std::string payload = payload_for(f, m, corpus);
            InjectionConfig cfg;  // n=2, Cycle
            auto [injected, rep] = inject_payload(f.doc, payload, cfg);
            Document reread = parse_document(write_document(injected));
            std::string human_after = extract_text(reread, View::Human);
            std::string stream_after = extract_text(reread, View::Stream);
            if (human_after == human_before) ++imperceptible;
            if (is_char_subsequence(stream_before, stream_after)) ++supersequence;

            bool all_words = true;
            if (rep.gaps_total > 0)
                for (const std::string& w : tokenize_payload(payload))
                    if (stream_after.find(encode_winansi(w)) == std::string::npos)
                        all_words = false;
            if (all_words && rep.gaps_total > 0) ++presence;
        }
    }
    double corpus_secs = seconds_since(t0);
    {
        char detail[128];
        std::snprintf(detail, sizeof(detail), "(%d/%d, %.1fs)", imperceptible, cases, corpus_secs);
        report(1, "imperceptibility", imperceptible == cases && corpus_secs < 30.0, detail);
        std::snprintf(detail, sizeof(detail), "(%d/%d)", supersequence, cases);
        report(2, "supersequence", supersequence == cases, detail);
    }

    // criterion 3: cycle presence (above) + single-pass word accounting
    {
        bool single_ok = true;
        for (const Fixture& f : fixtures) {
            InjectionConfig cfg;
            cfg.fill_policy = InjectionConfig::FillPolicy::SinglePass;
            auto [injected, rep] = inject_payload(f.doc, "only three words", cfg);
            if (rep.words_inserted != std::min(rep.gaps_total, rep.payload_words))
                single_ok = false;
        }
        char detail[128];
        std::snprintf(detail, sizeof(detail), "(cycle %d/%d, single-pass %s)", presence, cases,
                      single_ok ? "exact" : "off");
        report(3, "payload-presence", presence == cases && single_ok, detail);
    }

    // criterion 4: interleaving oracle, 200 randomized triples
    {
        std::mt19937_64 rng(424242);
        const std::string charset = "abcdefghijklmnopqrstuvwxyz ().,!?";
        std::uniform_int_distribution<int> len(1, 60);
        std::uniform_int_distribution<int> seg(1, 8);
        std::uniform_int_distribution<int> nwords(1, 6);
        std::uniform_int_distribution<std::size_t> ch(0, charset.size() - 1);
        std::uniform_int_distribution<std::size_t> bank(0, word_bank().size() - 1);
        int matched = 0;
        for (int t = 0; t < 200; ++t) {
            std::string text;
            int L = len(rng);
            for (int i = 0; i < L; ++i) text += charset[ch(rng)];
            int n = seg(rng);
            std::vector<std::string> words;
            int W = nwords(rng);
            for (int i = 0; i < W; ++i) words.push_back(word_bank()[bank(rng)]);
            std::string payload;
            for (const std::string& w : words) payload += w + " ";

            Document doc = single_string_doc(text);
            InjectionConfig cfg;
            cfg.segment_chars = n;
            auto [injected, rep] = inject_payload(doc, payload, cfg);
            std::string got = extract_text(injected, View::Stream);
            std::string want = oracle_interleave(text, words, n);
            if (got == want) ++matched;
        }
        char detail[64];
        std::snprintf(detail, sizeof(detail), "(%d/200)", matched);
        report(4, "interleaving-oracle", matched == 200, detail);
    }

    // criterion 5: structural file-size overhead on a ~1 MB fixture
    {
        auto t5 = Clock::now();
        std::mt19937_64 rng(5);
        std::vector<std::string> paragraphs;
        std::size_t total = 0;
        while (total < 1'000'000) {
            std::string p = make_paragraph(rng);
            total += p.size() + 1;
            paragraphs.push_back(std::move(p));
        }
        TextLayout wide;  // wide page: long lines keep the gap count moderate
        wide.page_width = 1200;
        wide.page_height = 792;
        wide.margin = 36;
        Document big = build_text_pdf(paragraphs, wide);
        std::string visible = extract_text(big, View::Human);

        InjectionConfig cfg;
        cfg.segment_chars = 256;  // coarser than one wrapped line: boundary gaps only
        cfg.fill_policy = InjectionConfig::FillPolicy::SinglePass;
        auto [injected, rep] = inject_payload(big, visible, cfg);

        double delta = static_cast<double>(rep.bytes_after) - static_cast<double>(rep.bytes_before);
        double mismatch = std::abs(delta - static_cast<double>(rep.insertion_bytes)) /
                          std::max(1.0, delta);
        double growth = delta / static_cast<double>(rep.bytes_before);
        double secs = seconds_since(t5);
        char detail[160];
        std::snprintf(detail, sizeof(detail),
                      "(before %zu, after %zu, growth %.1f%%, accounting off by %.2f%%, %.1fs)",
                      rep.bytes_before, rep.bytes_after, growth * 100, mismatch * 100, secs);
        report(5, "file-size-overhead",
               mismatch <= 0.01 && growth >= 0.05 && growth <= 0.40 && secs < 10.0, detail);
    }

    // criterion 6: round trips on all fixtures and their content streams
    {
        bool ok = true;
        std::vector<Document> docs;
        for (const Fixture& f : fixtures) docs.push_back(f.doc);
        docs.push_back(build_eyesight_pdf());
        {
            InjectionConfig cfg;
            docs.push_back(inject_payload(fixtures[0].doc, "round trip payload", cfg).first);
        }
        for (const Document& d : docs) {
            std::string bytes = write_document(d);
            Document re = parse_document(bytes);
            if (write_document(re) != bytes) ok = false;
            for (ObjectId pid : re.page_order) {
                const PdfValue* page = re.object(pid);
                std::string content = page_content_bytes(re, page->dict());
                auto ops = parse_content(content);
                if (parse_content(serialize_content(ops)) != ops) ok = false;
            }
        }
        report(6, "round-trips", ok, "(parse/write and content-stream identity)");
    }

    // criterion 7: eyesight probe
    {
        Document eye = parse_document(write_document(build_eyesight_pdf()));
        std::string stream = extract_text(eye, View::Stream);
        bool all_markers = true;
        for (const std::string& m : eyesight_markers())
            if (stream.find(m) == std::string::npos) all_markers = false;

        ExtractOptions strict;
        strict.strict_white = true;
        std::string human = extract_text(eye, View::Human, strict);
        auto cell_present = [&](const std::string& m) {
            for (std::size_t at = human.find(m); at != std::string::npos;
                 at = human.find(m, at + 1)) {
                std::size_t end = at + m.size();
                if (end == human.size() || human[end] == ' ') return true;
            }
            return false;
        };
        bool strict_exact = true;
        for (const std::string& m : eyesight_markers()) {
            bool invisible = false;
            for (const std::string& inv : eyesight_invisible_markers())
                if (m == inv) invisible = true;
            if (cell_present(m) == invisible) strict_exact = false;
        }
        auto hidden = list_hidden_runs(eye);
        bool flags_size_zero = false;
        for (const auto& h : hidden)
            if (h.cls == VisibilityClass::InvisibleSizeZero && h.text == "Size 0")
                flags_size_zero = true;
        char detail[96];
        std::snprintf(detail, sizeof(detail), "(10 markers, %zu hidden runs)", hidden.size());
        report(7, "eyesight-probe", all_markers && strict_exact && flags_size_zero, detail);
    }

    // criterion 8: metrics oracle (frozen table lives in the unit suite; the
    // gate re-checks the identity/disjoint anchors and two hand values)
    {
        using Tokens = std::vector<std::string>;
        Tokens same = {"the", "cat", "sat"};
        Tokens other = {"dog", "ran", "far"};
        bool ok = true;
        ok &= std::abs(bleu(same, same, 2) - 1.0) < 1e-9;
        ok &= std::abs(rouge_l(same, same).f1 - 1.0) < 1e-9;
        ok &= bleu(same, other, 1) == 0.0;
        ok &= rouge_n(same, other, 1).f1 == 0.0;
        // hand-computed: cand "the cat sat on the mat" vs ref "the cat ate the mat"
        Tokens c = {"the", "cat", "sat", "on", "the", "mat"};
        Tokens r = {"the", "cat", "ate", "the", "mat"};
        ok &= std::abs(bleu(c, r, 1) - 2.0 / 3.0) < 1e-9;
        ok &= std::abs(bleu(c, r, 2) - std::sqrt(4.0 / 15.0)) < 1e-9;
        ok &= std::abs(rouge_l(c, r).f1 - 8.0 / 11.0) < 1e-9;
        // brevity penalty anchor
        ok &= std::abs(bleu({"a"}, {"a", "b", "c", "d"}, 1) - std::exp(-3.0)) < 1e-9;
        report(8, "metrics-oracle", ok, "(identity, disjoint, hand-computed anchors)");
    }

    // criterion 9: rule-based generator goldens
    {
        bool ok = true;
        ok &= gen_promptattack("The meeting went well.", PromptAttackVariant::s1, 0, {}) ==
              "The meeting went well. @fasuv3";
        ok &= gen_promptattack("Is that so", PromptAttackVariant::c3, 0, {}) == "Is that so??";
        ok &= gen_promptattack("The report really surprised almost everyone.",
                               PromptAttackVariant::w2, 0, {}) ==
              "The report surprised everyone.";
        auto neg = gen_negation("Justin Rose is not resting on his laurels.");
        ok &= neg.rule == 1 && neg.sentence == "Justin Rose is resting on his laurels.";
        report(9, "generator-goldens", ok, "(s1, c3, w2, negation rule 1)");
    }

    // criterion 10: stubbed end-to-end pipeline run through the CLI
    {
        TempPath tmp;
        {
            std::ofstream out(tmp.at("doc.txt"));
            out << fixtures[0].text << "\n";
        }
        int rc_render = cli_main({"render", "--in", tmp.at("doc.txt"), "--out", tmp.at("doc.pdf")});
        int rc_pipe = cli_main({"pipeline", "--in", tmp.at("doc.pdf"), "--out", tmp.at("out.pdf"),
                                "--method", "hallucination", "--llm-stub", "echo:[STUB] "});
        bool exists = std::filesystem::exists(tmp.at("out.pdf"));
        char detail[96];
        std::snprintf(detail, sizeof(detail), "(render rc=%d, pipeline rc=%d)", rc_render, rc_pipe);
        report(10, "stubbed-pipeline", rc_render == 0 && rc_pipe == 0 && exists, detail);
    }

    if (g_failures) {
        std::printf("ACCEPTANCE: %d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("ACCEPTANCE: all 10 criteria passed\n");
    return 0;
}
