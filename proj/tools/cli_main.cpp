#include "cli_main.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "trapdoc/errors.hpp"
#include "trapdoc/extraction.hpp"
#include "trapdoc/eyesight.hpp"
#include "trapdoc/inject.hpp"
#include "trapdoc/metrics.hpp"
#include "trapdoc/pdf_io.hpp"
#include "trapdoc/perturb.hpp"

namespace trapdoc {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kBadInput = 2;
constexpr int kLlmFailure = 3;
constexpr int kInvariant = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path, const char* stage) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(std::string(stage) + ": cannot open input " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& bytes, bool force, const char* stage) {
    if (!force && std::filesystem::exists(path))
        throw UsageError(std::string(stage) + ": output " + path +
                         " exists; pass --force to overwrite");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(std::string(stage) + ": cannot open output " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(std::string(stage) + ": short write to " + path);
}

bool is_subsequence(const std::string& needle, const std::string& hay) {
    std::size_t i = 0;
    for (std::size_t j = 0; i < needle.size() && j < hay.size(); ++j)
        if (needle[i] == hay[j]) ++i;
    return i == needle.size();
}

InjectionConfig::Mode parse_mode(const std::string& s) {
    if (s == "size0") return InjectionConfig::Mode::SizeZero;
    if (s == "size0+tr3") return InjectionConfig::Mode::SizeZeroPlusRenderMode3;
    throw UsageError("unknown --mode " + s);
}

InjectionConfig::FillPolicy parse_fill(const std::string& s) {
    if (s == "cycle") return InjectionConfig::FillPolicy::Cycle;
    if (s == "single") return InjectionConfig::FillPolicy::SinglePass;
    throw UsageError("unknown --fill " + s);
}

PerturbationSpec parse_method(const std::string& m) {
    PerturbationSpec spec;
    if (m == "irrelevant") {
        spec.method = PerturbMethod::Irrelevant;
    } else if (m == "meta") {
        spec.method = PerturbMethod::MetaInstruction;
    } else if (m == "negation") {
        spec.method = PerturbMethod::Negation;
    } else if (m == "hallucination") {
        spec.method = PerturbMethod::Hallucination;
    } else if (m.rfind("attack-", 0) == 0) {
        spec.method = PerturbMethod::PromptAttack;
        std::string v = m.substr(7);
        if (v == "c1") spec.variant = PromptAttackVariant::c1;
        else if (v == "c2") spec.variant = PromptAttackVariant::c2;
        else if (v == "c3") spec.variant = PromptAttackVariant::c3;
        else if (v == "w1") spec.variant = PromptAttackVariant::w1;
        else if (v == "w2") spec.variant = PromptAttackVariant::w2;
        else if (v == "w3") spec.variant = PromptAttackVariant::w3;
        else if (v == "s1") spec.variant = PromptAttackVariant::s1;
        else if (v == "s2") spec.variant = PromptAttackVariant::s2;
        else if (v == "s3") spec.variant = PromptAttackVariant::s3;
        else throw UsageError("unknown attack variant " + v);
    } else {
        throw UsageError("unknown --method " + m +
                         " (irrelevant|meta|negation|hallucination|attack-XX)");
    }
    return spec;
}

std::optional<LlmConfig> build_llm(const std::string& endpoint, const std::string& model,
                                   const std::string& stub_spec) {
    if (stub_spec.empty() && endpoint.empty()) return std::nullopt;
    LlmConfig cfg;
    cfg.endpoint_url = endpoint;
    cfg.model_name = model;
    if (!stub_spec.empty()) {
        if (stub_spec == "fail") cfg.stub = StubFailAlways{};
        else if (stub_spec.rfind("echo:", 0) == 0) cfg.stub = StubEchoWithMarker{stub_spec.substr(5)};
        else if (stub_spec.rfind("fixed:", 0) == 0) cfg.stub = StubFixedResponse{stub_spec.substr(6)};
        else throw UsageError("unknown --llm-stub " + stub_spec +
                              " (echo:MARKER|fixed:TEXT|fail)");
    }
    return cfg;
}

std::vector<CorpusEntry> load_corpus(const std::string& path) {
    if (path.empty()) return {};
    json j = json::parse(slurp(path, "perturb"), nullptr, false);
    if (j.is_discarded() || !j.is_array())
        throw Error("perturb: corpus " + path + " is not a JSON array");
    std::vector<CorpusEntry> out;
    for (const auto& e : j)
        out.push_back({e.at("id").get<std::string>(), e.at("text").get<std::string>()});
    return out;
}

json report_to_json(const InjectionReport& r) {
    json pages = json::array();
    for (const PageInjection& p : r.per_page)
        pages.push_back({{"page_index", p.page_index},
                         {"runs_rewritten", p.runs_rewritten},
                         {"words_inserted", p.words_inserted},
                         {"content_bytes_delta", p.content_bytes_delta}});
    return {{"gaps_total", r.gaps_total},
            {"words_inserted", r.words_inserted},
            {"payload_words", r.payload_words},
            {"payload_exhausted", r.payload_exhausted},
            {"bytes_before", r.bytes_before},
            {"bytes_after", r.bytes_after},
            {"insertion_bytes", r.insertion_bytes},
            {"per_page", pages}};
}

struct InjectFlags {
    std::string in, out, payload_file, payload_text, report;
    std::string mode = "size0", fill = "cycle";
    int segment_chars = 2;
    bool force = false;
};

void add_inject_flags(CLI::App* cmd, InjectFlags& f, bool with_payload) {
    cmd->add_option("--in", f.in, "input PDF")->required();
    cmd->add_option("--out", f.out, "output PDF")->required();
    if (with_payload) {
        cmd->add_option("--payload", f.payload_file, "payload text file");
        cmd->add_option("--payload-text", f.payload_text, "payload text inline");
    }
    cmd->add_option("--segment-chars", f.segment_chars, "segment length n")->check(CLI::PositiveNumber);
    cmd->add_option("--mode", f.mode, "size0|size0+tr3");
    cmd->add_option("--fill", f.fill, "cycle|single");
    cmd->add_option("--report", f.report, "write JSON injection report");
    cmd->add_flag("--force", f.force, "overwrite existing output");
}

int do_inject(const Document& doc, const std::string& payload, const InjectFlags& f,
              const char* stage) {
    InjectionConfig cfg;
    cfg.segment_chars = f.segment_chars;
    cfg.mode = parse_mode(f.mode);
    cfg.fill_policy = parse_fill(f.fill);
    auto [out_doc, report] = inject_payload(doc, payload, cfg);
    spit(f.out, write_document(out_doc), f.force, stage);
    if (!f.report.empty()) spit(f.report, report_to_json(report).dump(2) + "\n", true, stage);
    return kOk;
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"trapdoc: phantom-token PDF injection toolkit"};
    app.require_subcommand(1);

    // inject
    auto* inject = app.add_subcommand("inject", "inject an invisible payload into a PDF");
    InjectFlags inj;
    add_inject_flags(inject, inj, true);

    // perturb
    auto* perturb = app.add_subcommand("perturb", "generate a perturbed payload from text");
    std::string pe_method, pe_in, pe_out, pe_corpus, pe_id, pe_endpoint, pe_model, pe_stub;
    std::uint64_t pe_seed = 0;
    bool pe_force = false;
    perturb->add_option("--method", pe_method, "perturbation method")->required();
    perturb->add_option("--in", pe_in, "input text file")->required();
    perturb->add_option("--out", pe_out, "output text file")->required();
    perturb->add_option("--corpus", pe_corpus, "JSON corpus for --method irrelevant");
    perturb->add_option("--id", pe_id, "target id inside the corpus");
    perturb->add_option("--seed", pe_seed, "RNG seed");
    perturb->add_option("--llm-endpoint", pe_endpoint, "chat-completions URL");
    perturb->add_option("--llm-model", pe_model, "model name");
    perturb->add_option("--llm-stub", pe_stub, "offline stub: echo:MARKER|fixed:TEXT|fail");
    perturb->add_flag("--force", pe_force, "overwrite existing output");

    // extract
    auto* extract = app.add_subcommand("extract", "print extracted text");
    std::string ex_in, ex_view = "stream";
    bool ex_strict = false;
    extract->add_option("--in", ex_in, "input PDF")->required();
    extract->add_option("--view", ex_view, "stream|human");
    extract->add_flag("--strict-white", ex_strict, "drop white-on-white and zero-alpha runs");

    // inspect
    auto* inspect = app.add_subcommand("inspect", "list hidden text runs");
    std::string in_in, in_report;
    inspect->add_option("--in", in_in, "input PDF")->required();
    inspect->add_option("--report", in_report, "write JSONL report");

    // eyesight
    auto* eyesight = app.add_subcommand("eyesight", "write the reader probe PDF");
    std::string ey_out;
    bool ey_force = false;
    eyesight->add_option("--out", ey_out, "output PDF")->required();
    eyesight->add_flag("--force", ey_force, "overwrite existing output");

    // render
    auto* render = app.add_subcommand("render", "render a UTF-8 text file to PDF");
    std::string re_in, re_out;
    TextLayout layout;
    bool re_force = false;
    render->add_option("--in", re_in, "input text file")->required();
    render->add_option("--out", re_out, "output PDF")->required();
    render->add_option("--page-width", layout.page_width, "page width in points");
    render->add_option("--page-height", layout.page_height, "page height in points");
    render->add_option("--margin", layout.margin, "margin in points");
    render->add_option("--font-size", layout.base_font_size, "font size in points");
    render->add_option("--leading", layout.leading, "line leading in points");
    render->add_flag("--force", re_force, "overwrite existing output");

    // score
    auto* score = app.add_subcommand("score", "BLEU/ROUGE between two text files");
    std::string sc_cand, sc_ref;
    score->add_option("--candidate", sc_cand, "candidate text file")->required();
    score->add_option("--reference", sc_ref, "reference text file")->required();

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "extract -> perturb -> inject in one pass");
    InjectFlags pl;
    add_inject_flags(pipeline, pl, false);
    std::string pl_method, pl_corpus, pl_id, pl_endpoint, pl_model, pl_stub;
    std::uint64_t pl_seed = 0;
    pipeline->add_option("--method", pl_method, "perturbation method")->required();
    pipeline->add_option("--corpus", pl_corpus, "JSON corpus for --method irrelevant");
    pipeline->add_option("--id", pl_id, "target id inside the corpus");
    pipeline->add_option("--seed", pl_seed, "RNG seed");
    pipeline->add_option("--llm-endpoint", pl_endpoint, "chat-completions URL");
    pipeline->add_option("--llm-model", pl_model, "model name");
    pipeline->add_option("--llm-stub", pl_stub, "offline stub: echo:MARKER|fixed:TEXT|fail");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    if (inject->parsed()) {
        if (inj.payload_file.empty() == inj.payload_text.empty())
            throw UsageError("inject: exactly one of --payload / --payload-text is required");
        std::string payload =
            inj.payload_file.empty() ? inj.payload_text : slurp(inj.payload_file, "inject");
        Document doc = parse_document(slurp(inj.in, "inject"));
        return do_inject(doc, payload, inj, "inject");
    }

    if (perturb->parsed()) {
        PerturbationSpec spec = parse_method(pe_method);
        spec.rng_seed = pe_seed;
        spec.llm = build_llm(pe_endpoint, pe_model, pe_stub);
        std::string text = slurp(pe_in, "perturb");
        std::string payload = generate_payload(text, spec, load_corpus(pe_corpus), pe_id);
        spit(pe_out, payload, pe_force, "perturb");
        return kOk;
    }

    if (extract->parsed()) {
        if (ex_view != "stream" && ex_view != "human")
            throw UsageError("extract: --view must be stream or human");
        Document doc = parse_document(slurp(ex_in, "extract"));
        ExtractOptions opts;
        opts.strict_white = ex_strict;
        std::cout << extract_text(doc, ex_view == "human" ? View::Human : View::Stream, opts)
                  << "\n";
        return kOk;
    }

    if (inspect->parsed()) {
        Document doc = parse_document(slurp(in_in, "inspect"));
        std::string lines;
        for (const HiddenRunReport& r : list_hidden_runs(doc)) {
            json rec = {{"page_index", r.page_index},
                        {"op_index", r.op_index},
                        {"class", to_string(r.cls)},
                        {"text", r.text},
                        {"byte_length", r.byte_length}};
            lines += rec.dump() + "\n";
        }
        std::cout << lines;
        if (!in_report.empty()) spit(in_report, lines, true, "inspect");
        return kOk;
    }

    if (eyesight->parsed()) {
        spit(ey_out, write_document(build_eyesight_pdf()), ey_force, "eyesight");
        return kOk;
    }

    if (render->parsed()) {
        std::string text = slurp(re_in, "render");
        std::vector<std::string> paragraphs;
        std::string cur;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);) {
            if (line.empty()) {
                if (!cur.empty()) paragraphs.push_back(cur);
                cur.clear();
            } else {
                if (!cur.empty()) cur += ' ';
                cur += line;
            }
        }
        if (!cur.empty()) paragraphs.push_back(cur);
        if (paragraphs.empty()) throw Error("render: input " + re_in + " has no text");
        int replaced = 0;
        Document doc = build_text_pdf(paragraphs, layout, &replaced);
        if (replaced)
            std::cerr << "render: replaced " << replaced << " unencodable characters with '?'\n";
        spit(re_out, write_document(doc), re_force, "render");
        return kOk;
    }

    if (score->parsed()) {
        ScoreReport r = score_pair(slurp(sc_cand, "score"), slurp(sc_ref, "score"));
        json rec = {{"bleu1", r.bleu1},
                    {"bleu2", r.bleu2},
                    {"rouge1", {{"p", r.rouge1.precision}, {"r", r.rouge1.recall}, {"f1", r.rouge1.f1}}},
                    {"rouge2", {{"p", r.rouge2.precision}, {"r", r.rouge2.recall}, {"f1", r.rouge2.f1}}},
                    {"rougeL", {{"p", r.rougeL.precision}, {"r", r.rougeL.recall}, {"f1", r.rougeL.f1}}},
                    {"candidate_tokens", r.candidate_tokens},
                    {"reference_tokens", r.reference_tokens}};
        std::cout << rec.dump(2) << "\n";
        return kOk;
    }

    if (pipeline->parsed()) {
        PerturbationSpec spec = parse_method(pl_method);
        spec.rng_seed = pl_seed;
        spec.llm = build_llm(pl_endpoint, pl_model, pl_stub);
        Document doc = parse_document(slurp(pl.in, "pipeline"));
        std::string original = extract_text(doc, View::Human);
        std::string payload = generate_payload(original, spec, load_corpus(pl_corpus), pl_id);

        InjectionConfig cfg;
        cfg.segment_chars = pl.segment_chars;
        cfg.mode = parse_mode(pl.mode);
        cfg.fill_policy = parse_fill(pl.fill);
        auto [out_doc, report] = inject_payload(doc, payload, cfg);

        // self-verification before anything ships
        Document reread = parse_document(write_document(out_doc));
        if (extract_text(reread, View::Human) != original) {
            std::cerr << "pipeline: invariant violation: human view changed for " << pl.in << "\n";
            return kInvariant;
        }
        if (!is_subsequence(extract_text(doc, View::Stream), extract_text(reread, View::Stream))) {
            std::cerr << "pipeline: invariant violation: stream view lost content for " << pl.in
                      << "\n";
            return kInvariant;
        }

        spit(pl.out, write_document(out_doc), pl.force, "pipeline");
        if (!pl.report.empty()) spit(pl.report, report_to_json(report).dump(2) + "\n", true, "pipeline");
        return kOk;
    }

    return kUsage;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    try {
        return run(args);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const LlmError& e) {
        std::cerr << "error: LLM: " << e.what() << "\n";
        return kLlmFailure;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInvariant;
    }
}

int cli_main(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args);
}

}  // namespace trapdoc
