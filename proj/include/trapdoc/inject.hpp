#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trapdoc/pdf_value.hpp"

namespace trapdoc {

struct InjectionConfig {
    enum class Mode { SizeZero, SizeZeroPlusRenderMode3 };
    enum class FillPolicy { Cycle, SinglePass };

    int segment_chars = 2;  // n
    Mode mode = Mode::SizeZero;
    FillPolicy fill_policy = FillPolicy::Cycle;
    std::string payload_font_name = "PayloadF";  // probed against collisions
    bool skip_composite_unknown = true;
    std::uint64_t rng_seed = 0;  // reserved for generators; injection is deterministic
};

struct PageInjection {
    std::size_t page_index = 0;
    std::size_t runs_rewritten = 0;
    std::size_t words_inserted = 0;
    std::int64_t content_bytes_delta = 0;  // new minus old stream payload bytes
};

struct InjectionReport {
    std::size_t gaps_total = 0;
    std::size_t words_inserted = 0;
    std::size_t payload_words = 0;
    bool payload_exhausted = false;  // meaningful under SinglePass
    std::size_t bytes_before = 0;
    std::size_t bytes_after = 0;
    std::size_t insertion_bytes = 0;  // content bytes added by the rewrite
    std::vector<PageInjection> per_page;
};

// Splits shown bytes into segments of n codes. Concatenation of the result
// equals the input; a trailing odd byte of a 2-byte font stays attached to
// the last segment (flagged).
std::vector<std::string> split_segments(std::string_view raw, int n, int code_unit,
                                        bool* odd_tail = nullptr);

// The core rewrite: every text-showing string is split into n-character
// segments with an invisible payload word between consecutive segments and
// between consecutive show ops of the same text object. Visible rendering is
// unchanged.
std::pair<Document, InjectionReport> inject_payload(const Document& doc,
                                                    const std::string& payload,
                                                    const InjectionConfig& config);

}  // namespace trapdoc
