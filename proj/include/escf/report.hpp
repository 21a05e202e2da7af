#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

namespace escf {

// Outcome of one property scan: what was checked over which range, whether it
// held, and enough witness data to reproduce a failure. stats is an ordered
// map so serialized reports are deterministic.
struct ScanReport {
    std::string id;
    std::string range;
    bool pass = true;
    std::vector<std::string> counterexamples;  // capped; see counterexample_count
    std::uint64_t counterexample_count = 0;
    std::map<std::string, std::string> stats;
    std::string checkpoint;  // opaque resume token, empty if not a checkpointed scan

    static constexpr std::size_t kCounterexampleCap = 16;

    void fail(std::string witness) {
        pass = false;
        ++counterexample_count;
        if (counterexamples.size() < kCounterexampleCap)
            counterexamples.push_back(std::move(witness));
    }

    // Merge a chunk report produced by the same scan over a later subrange.
    void absorb(const ScanReport& later) {
        if (!later.pass) pass = false;
        for (const auto& c : later.counterexamples)
            if (counterexamples.size() < kCounterexampleCap) counterexamples.push_back(c);
        counterexample_count += later.counterexample_count;
        for (const auto& [k, v] : later.stats) {
            auto it = stats.find(k);
            if (it == stats.end()) {
                stats[k] = v;
            } else {
                // numeric stats add up; non-numeric ones keep the first value
                char* e1 = nullptr;
                char* e2 = nullptr;
                unsigned long long a = std::strtoull(it->second.c_str(), &e1, 10);
                unsigned long long b = std::strtoull(v.c_str(), &e2, 10);
                if (e1 && *e1 == '\0' && e2 && *e2 == '\0' && !it->second.empty() && !v.empty())
                    it->second = std::to_string(a + b);
            }
        }
    }
};

}  // namespace escf
