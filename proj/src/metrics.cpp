#include "trapdoc/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace trapdoc {

namespace {

using Counts = std::map<std::vector<std::string>, std::size_t>;

Counts ngram_counts(const std::vector<std::string>& tokens, int n) {
    Counts out;
    if (n <= 0 || tokens.size() < static_cast<std::size_t>(n)) return out;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++out[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
    return out;
}

std::size_t clipped_overlap(const Counts& cand, const Counts& ref) {
    std::size_t total = 0;
    for (const auto& [gram, count] : cand) {
        auto it = ref.find(gram);
        if (it != ref.end()) total += std::min(count, it->second);
    }
    return total;
}

PrfScore make_prf(std::size_t overlap, std::size_t cand_total, std::size_t ref_total) {
    PrfScore s;
    if (cand_total == 0 || ref_total == 0) return s;
    s.precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
    s.recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
    if (s.precision + s.recall > 0)
        s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

}  // namespace

std::vector<std::string> tokenize_for_metrics(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

double bleu(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
            int max_n) {
    if (candidate.empty() || reference.empty() || max_n < 1) return 0;
    double log_sum = 0;
    for (int n = 1; n <= max_n; ++n) {
        Counts cand = ngram_counts(candidate, n);
        Counts ref = ngram_counts(reference, n);
        std::size_t total = 0;
        for (const auto& [gram, count] : cand) total += count;
        if (total == 0) return 0;
        std::size_t matched = clipped_overlap(cand, ref);
        if (matched == 0) return 0;
        log_sum += std::log(static_cast<double>(matched) / static_cast<double>(total));
    }
    double score = std::exp(log_sum / max_n);
    if (candidate.size() < reference.size())
        score *= std::exp(1.0 - static_cast<double>(reference.size()) /
                                    static_cast<double>(candidate.size()));
    return score;
}

PrfScore rouge_n(const std::vector<std::string>& candidate,
                 const std::vector<std::string>& reference, int n) {
    Counts cand = ngram_counts(candidate, n);
    Counts ref = ngram_counts(reference, n);
    std::size_t cand_total = 0, ref_total = 0;
    for (const auto& [gram, count] : cand) cand_total += count;
    for (const auto& [gram, count] : ref) ref_total += count;
    return make_prf(clipped_overlap(cand, ref), cand_total, ref_total);
}

PrfScore rouge_l(const std::vector<std::string>& candidate,
                 const std::vector<std::string>& reference) {
    const std::size_t m = candidate.size(), r = reference.size();
    if (m == 0 || r == 0) return {};
    std::vector<std::size_t> prev(r + 1, 0), cur(r + 1, 0);
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= r; ++j) {
            if (candidate[i - 1] == reference[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return make_prf(prev[r], m, r);
}

ScoreReport score_pair(const std::string& candidate, const std::string& reference) {
    std::vector<std::string> c = tokenize_for_metrics(candidate);
    std::vector<std::string> r = tokenize_for_metrics(reference);
    ScoreReport rep;
    rep.candidate_tokens = c.size();
    rep.reference_tokens = r.size();
    rep.bleu1 = bleu(c, r, 1);
    rep.bleu2 = bleu(c, r, 2);
    rep.rouge1 = rouge_n(c, r, 1);
    rep.rouge2 = rouge_n(c, r, 2);
    rep.rougeL = rouge_l(c, r);
    return rep;
}

}  // namespace trapdoc
