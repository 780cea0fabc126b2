#include "trapdoc/perturb.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "trapdoc/errors.hpp"

namespace trapdoc {

namespace {

const std::array<const char*, 24> kAuxiliaries = {
    "am",   "is",   "are",  "was",    "were", "be",   "been", "being",
    "do",   "does", "did",  "have",   "has",  "had",  "will", "would",
    "can",  "could", "shall", "should", "may", "might", "must", "ought"};

// Contraction -> bare auxiliary, for negator removal.
struct Contraction {
    const char* negated;
    const char* base;
};
const std::array<Contraction, 18> kContractions = {{
    {"isn't", "is"},       {"aren't", "are"},     {"wasn't", "was"},
    {"weren't", "were"},   {"don't", "do"},       {"doesn't", "does"},
    {"didn't", "did"},     {"haven't", "have"},   {"hasn't", "has"},
    {"hadn't", "had"},     {"won't", "will"},     {"wouldn't", "would"},
    {"can't", "can"},      {"couldn't", "could"}, {"shan't", "shall"},
    {"shouldn't", "should"}, {"mustn't", "must"}, {"mightn't", "might"},
}};

// Deletable filler words for the w2 attack. Deliberately excludes articles:
// dropping those reads as ungrammatical rather than unimportant.
const std::array<const char*, 17> kStopwords = {
    "really", "very",      "quite",    "almost",    "just",   "simply",
    "rather", "somewhat",  "indeed",   "certainly", "actually", "basically",
    "totally", "truly",    "fairly",   "pretty",    "nearly"};

// QWERTY neighbors for letter substitution.
const char* keyboard_neighbors(char c) {
    switch (std::tolower(static_cast<unsigned char>(c))) {
        case 'q': return "wa";
        case 'w': return "qes";
        case 'e': return "wrd";
        case 'r': return "etf";
        case 't': return "ryg";
        case 'y': return "tuh";
        case 'u': return "yij";
        case 'i': return "uok";
        case 'o': return "ipl";
        case 'p': return "ol";
        case 'a': return "qsz";
        case 's': return "awdx";
        case 'd': return "sefc";
        case 'f': return "drgv";
        case 'g': return "fthb";
        case 'h': return "gyjn";
        case 'j': return "hukm";
        case 'k': return "jil";
        case 'l': return "kop";
        case 'z': return "asx";
        case 'x': return "zsc";
        case 'c': return "xdv";
        case 'v': return "cfb";
        case 'b': return "vgn";
        case 'n': return "bhm";
        case 'm': return "njk";
        default: return "";
    }
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

// word core without leading/trailing punctuation; prefix/suffix returned too
void split_word(const std::string& w, std::string& pre, std::string& core, std::string& post) {
    std::size_t b = 0, e = w.size();
    while (b < e && !std::isalnum(static_cast<unsigned char>(w[b])) && w[b] != '\'') ++b;
    while (e > b && !std::isalnum(static_cast<unsigned char>(w[e - 1])) && w[e - 1] != '\'') --e;
    pre = w.substr(0, b);
    core = w.substr(b, e - b);
    post = w.substr(e);
}

bool is_auxiliary(const std::string& core_lower) {
    return std::find_if(kAuxiliaries.begin(), kAuxiliaries.end(),
                        [&](const char* a) { return core_lower == a; }) != kAuxiliaries.end();
}

std::vector<std::string> words_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out.push_back(' ');
        out += words[i];
    }
    return out;
}

const char* promptattack_rule(PromptAttackVariant v) {
    switch (v) {
        case PromptAttackVariant::w1:
            return "Replace at most two words in the sentence with synonyms.";
        case PromptAttackVariant::s2:
            return "Rephrase the sentence without changing meaning.";
        case PromptAttackVariant::s3:
            return "Change the syntactic structure of the sentence.";
        default: return "";
    }
}

}  // namespace

std::vector<std::string> tokenize_payload(const std::string& text) {
    std::vector<std::string> words = words_of(text);
    if (words.empty()) throw EmptyPayload("payload contains no words");
    return words;
}

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        cur.push_back(c);
        bool final_punct = c == '.' || c == '?' || c == '!';
        bool at_break = final_punct && (i + 1 >= text.size() ||
                                        std::isspace(static_cast<unsigned char>(text[i + 1])));
        if (at_break) {
            while (i + 1 < text.size() && std::isspace(static_cast<unsigned char>(text[i + 1]))) ++i;
            out.push_back(cur);
            cur.clear();
        }
    }
    // trim leftovers
    std::size_t b = cur.find_first_not_of(" \t\r\n");
    if (b != std::string::npos) out.push_back(cur.substr(b));
    return out;
}

std::string gen_irrelevant(const std::vector<CorpusEntry>& corpus, const std::string& target_id,
                           std::uint64_t seed) {
    if (corpus.size() < 2) throw CorpusTooSmall("corpus needs at least 2 entries");
    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    // cyclic shift over the shuffled order: a derangement for any size >= 2
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (corpus[order[k]].id == target_id)
            return corpus[order[(k + 1) % order.size()]].text;
    }
    throw CorpusTooSmall("target id not present in corpus");
}

std::string gen_meta_instruction(const std::string& text, const MetaTemplate& tmpl) {
    return tmpl.prefix + "\"" + text + "\"" + tmpl.suffix;
}

NegationResult gen_negation(const std::string& sentence) {
    std::vector<std::string> words = words_of(sentence);

    // rule 1: remove an existing negator
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::string pre, core, post;
        split_word(words[i], pre, core, post);
        std::string lc = lower(core);
        for (const Contraction& c : kContractions) {
            if (lc == c.negated) {
                std::string base(c.base);
                if (std::isupper(static_cast<unsigned char>(core[0])))
                    base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
                words[i] = pre + base + post;
                return {join_words(words), false, 1};
            }
        }
        if (is_auxiliary(lc) && i + 1 < words.size()) {
            std::string npre, ncore, npost;
            split_word(words[i + 1], npre, ncore, npost);
            if (lower(ncore) == "not") {
                words[i] += npost;  // keep punctuation that followed "not"
                words.erase(words.begin() + i + 1);
                return {join_words(words), false, 1};
            }
        }
    }

    // rule 2: insert "not" after the first auxiliary
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::string pre, core, post;
        split_word(words[i], pre, core, post);
        if (is_auxiliary(lower(core))) {
            std::string moved_post = post;
            words[i] = pre + core;
            words.insert(words.begin() + i + 1, "not" + moved_post);
            return {join_words(words), false, 2};
        }
    }

    // rule 3: determiner negation is out of scope
    if (sentence.rfind("No ", 0) == 0) return {sentence, true, 3};

    // rule 4: clause wrapper
    std::string body = join_words(words);
    if (body.empty()) return {sentence, true, 0};
    for (char& c : body) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            break;
        }
    }
    return {"It is not the case that " + body, false, 4};
}

std::string negate_paragraph(const std::string& text, int* flagged_count) {
    int flagged = 0;
    std::vector<std::string> out;
    for (const std::string& s : split_sentences(text)) {
        NegationResult r = gen_negation(s);
        if (r.flagged) ++flagged;
        out.push_back(r.sentence);
    }
    if (flagged_count) *flagged_count = flagged;
    return join_words(out);
}

std::string gen_hallucination(const std::string& text, const LlmConfig& llm) {
    std::vector<ChatMessage> messages{
        {"system",
         "Rewrite each sentence so that length and syntax look similar, but "
         "concrete facts differ."},
        {"user", text}};
    std::string out = complete(messages, llm);
    if (out.empty()) throw LlmRefusal("empty completion");
    double in_n = static_cast<double>(split_sentences(text).size());
    double out_n = static_cast<double>(split_sentences(out).size());
    if (in_n > 0 && (out_n < 0.8 * in_n || out_n > 1.2 * in_n))
        std::cerr << "warning: hallucination sentence count drifted (" << in_n << " -> "
                  << out_n << ")\n";
    return out;
}

std::string gen_promptattack(const std::string& text, PromptAttackVariant variant,
                             std::uint64_t seed, const std::optional<LlmConfig>& llm) {
    std::mt19937_64 rng(seed);
    switch (variant) {
        case PromptAttackVariant::c1: {  // typos via adjacent transposition
            std::vector<std::string> words = words_of(text);
            std::vector<std::size_t> candidates;
            for (std::size_t i = 0; i < words.size(); ++i) {
                std::string pre, core, post;
                split_word(words[i], pre, core, post);
                if (core.size() >= 4) candidates.push_back(i);
            }
            std::shuffle(candidates.begin(), candidates.end(), rng);
            std::size_t limit = std::min<std::size_t>(2, candidates.size());
            for (std::size_t k = 0; k < limit; ++k) {
                std::string pre, core, post;
                split_word(words[candidates[k]], pre, core, post);
                std::uniform_int_distribution<std::size_t> pick(1, core.size() - 3);
                std::size_t at = pick(rng);
                std::swap(core[at], core[at + 1]);
                words[candidates[k]] = pre + core + post;
            }
            return join_words(words);
        }
        case PromptAttackVariant::c2: {  // keyboard-neighbor substitution
            std::vector<std::string> words = words_of(text);
            std::vector<std::size_t> candidates;
            for (std::size_t i = 0; i < words.size(); ++i) {
                std::string pre, core, post;
                split_word(words[i], pre, core, post);
                if (!core.empty() && *keyboard_neighbors(core[core.size() / 2])) candidates.push_back(i);
            }
            std::shuffle(candidates.begin(), candidates.end(), rng);
            std::size_t limit = std::min<std::size_t>(2, candidates.size());
            for (std::size_t k = 0; k < limit; ++k) {
                std::string pre, core, post;
                split_word(words[candidates[k]], pre, core, post);
                std::size_t at = core.size() / 2;
                const char* nb = keyboard_neighbors(core[at]);
                std::uniform_int_distribution<std::size_t> pick(0, std::char_traits<char>::length(nb) - 1);
                char repl = nb[pick(rng)];
                if (std::isupper(static_cast<unsigned char>(core[at])))
                    repl = static_cast<char>(std::toupper(static_cast<unsigned char>(repl)));
                core[at] = repl;
                words[candidates[k]] = pre + core + post;
            }
            return join_words(words);
        }
        case PromptAttackVariant::c3:
            return text + "??";
        case PromptAttackVariant::w2: {  // stopword deletion
            std::vector<std::string> words = words_of(text);
            std::vector<std::string> out;
            int removed = 0;
            for (const std::string& w : words) {
                std::string pre, core, post;
                split_word(w, pre, core, post);
                bool stop = removed < 2 &&
                            std::find_if(kStopwords.begin(), kStopwords.end(), [&](const char* s) {
                                return lower(core) == s;
                            }) != kStopwords.end() &&
                            pre.empty() && post.empty();
                if (stop) {
                    ++removed;
                    continue;
                }
                out.push_back(w);
            }
            return join_words(out);
        }
        case PromptAttackVariant::w3: {  // neutral insertion at the first clause boundary
            std::vector<std::string> words = words_of(text);
            if (words.empty()) return text;
            words[0] += ",";
            words.insert(words.begin() + 1, "indeed,");
            return join_words(words);
        }
        case PromptAttackVariant::s1:
            return text + " @fasuv3";
        case PromptAttackVariant::w1:
        case PromptAttackVariant::s2:
        case PromptAttackVariant::s3: {
            if (!llm) throw LlmRequired("variant requires an LLM configuration");
            std::vector<ChatMessage> messages{{"system", promptattack_rule(variant)},
                                              {"user", text}};
            std::string out = complete(messages, *llm);
            if (out.empty()) throw LlmRefusal("empty completion");
            return out;
        }
    }
    return text;
}

std::string generate_payload(const std::string& original_text, const PerturbationSpec& spec,
                             const std::vector<CorpusEntry>& corpus,
                             const std::string& target_id) {
    switch (spec.method) {
        case PerturbMethod::Irrelevant:
            return gen_irrelevant(corpus, target_id, spec.rng_seed);
        case PerturbMethod::MetaInstruction:
            return gen_meta_instruction(original_text);
        case PerturbMethod::Negation:
            return negate_paragraph(original_text);
        case PerturbMethod::Hallucination:
            if (!spec.llm) throw LlmRequired("hallucination requires an LLM configuration");
            return gen_hallucination(original_text, *spec.llm);
        case PerturbMethod::PromptAttack: {
            bool needs_llm = spec.variant == PromptAttackVariant::w1 ||
                             spec.variant == PromptAttackVariant::s2 ||
                             spec.variant == PromptAttackVariant::s3;
            if (needs_llm && !spec.llm) throw LlmRequired("variant requires an LLM configuration");
            std::vector<std::string> out;
            std::uint64_t seed = spec.rng_seed;
            for (const std::string& s : split_sentences(original_text))
                out.push_back(gen_promptattack(s, spec.variant, seed++, spec.llm));
            return out.empty() ? original_text
                               : std::accumulate(std::next(out.begin()), out.end(), out[0],
                                                 [](std::string acc, const std::string& s) {
                                                     return std::move(acc) + " " + s;
                                                 });
        }
    }
    return original_text;
}

}  // namespace trapdoc
