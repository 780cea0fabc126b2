#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace trapdoc {

// Lowercases and splits on maximal runs of non-alphanumeric bytes.
std::vector<std::string> tokenize_for_metrics(const std::string& text);

struct PrfScore {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

// Clipped n-gram precision geometric mean with brevity penalty. Zero when any
// order has zero matches or the candidate is empty.
double bleu(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
            int max_n);

// Clipped n-gram overlap precision/recall/F1. Zeros when either side lacks
// n-grams.
PrfScore rouge_n(const std::vector<std::string>& candidate,
                 const std::vector<std::string>& reference, int n);

// Longest-common-subsequence precision/recall/F1.
PrfScore rouge_l(const std::vector<std::string>& candidate,
                 const std::vector<std::string>& reference);

struct ScoreReport {
    double bleu1 = 0;
    double bleu2 = 0;
    PrfScore rouge1;
    PrfScore rouge2;
    PrfScore rougeL;
    std::size_t candidate_tokens = 0;
    std::size_t reference_tokens = 0;
};

ScoreReport score_pair(const std::string& candidate, const std::string& reference);

}  // namespace trapdoc
