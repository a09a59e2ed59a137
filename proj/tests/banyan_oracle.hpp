// Copyright 2026 The qbanyan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force link-occupancy oracle for banyan routing, written from the
// closed-form unique path of each wiring rather than the topology tables.

#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "qbanyan/banyan.hpp"

namespace qbanyan::test_util {

/// (source, destination) pairs with distinct sources and destinations.
using Load = std::vector<std::pair<int, int>>;

/// Line of a packet after stage i. Omega rotates the source left and shifts
/// in destination bits; butterfly overwrites the top i bits of the source.
inline int line_after(Wiring w, int n, int src, int dest, int i) {
    const int N = 1 << n;
    if (i == 0) {
        return src;
    }
    if (w == Wiring::OmegaShuffle) {
        return ((src << i) | (dest >> (n - i))) & (N - 1);
    }
    const int top = ((N - 1) >> (n - i)) << (n - i);
    return (src & ~top) | (dest & top);
}

/// Identifier of the switch a packet traverses at stage i.
inline int switch_id(Wiring w, int n, int src, int dest, int i) {
    const int out = line_after(w, n, src, dest, i);
    return w == Wiring::OmegaShuffle ? out >> 1 : out & ~(1 << (n - i));
}

struct OracleVerdict {
    bool blocked = false;      // some link demanded twice
    bool unsupported = false;  // some switch sees a shared link plus another packet
    int fused_segments = 0;    // links newly carrying two packets
    int first_fusion_stage = 0;
    int engaged = 0;           // switches with at least one packet, summed over stages
};

inline OracleVerdict oracle(Wiring w, int n, const Load &load) {
    OracleVerdict v;
    for (int i = 1; i <= n; ++i) {
        std::map<int, std::set<int>> link_from;   // output link -> input links feeding it
        std::map<int, int> link_count;
        std::map<int, std::map<int, int>> inputs;  // switch -> input line -> count
        for (const auto &[s, d] : load) {
            const int out = line_after(w, n, s, d, i);
            const int in = line_after(w, n, s, d, i - 1);
            ++link_count[out];
            link_from[out].insert(in);
            ++inputs[switch_id(w, n, s, d, i)][in];
        }
        for (const auto &[l, c] : link_count) {
            if (c > 1) {
                v.blocked = true;
                if (link_from[l].size() == 2) {
                    ++v.fused_segments;
                    if (v.first_fusion_stage == 0) {
                        v.first_fusion_stage = i;
                    }
                }
            }
        }
        for (const auto &[sw, in] : inputs) {
            if (in.size() == 2 && std::max(in.begin()->second, in.rbegin()->second) >= 2) {
                v.unsupported = true;
            }
        }
        v.engaged += static_cast<int>(inputs.size());
    }
    return v;
}

inline Load full_load(const std::vector<int> &perm) {
    Load l;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        l.emplace_back(static_cast<int>(i), perm[i]);
    }
    return l;
}

inline std::vector<std::vector<int>> all_perms(int N) {
    std::vector<int> p(static_cast<std::size_t>(N));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

inline int stages_of(int N) {
    int n = 0;
    while ((1 << n) < N) {
        ++n;
    }
    return n;
}

/// A load with exactly one fused segment, no unsupported contention, and a
/// conflict at the latest possible fusion stage: the two colliding packets are
/// found first, then other packets are added greedily while the verdict holds.
inline Load one_conflict_load(Wiring w, int N) {
    const int n = stages_of(N);
    Load best;
    int best_stage = 0;
    for (int a = 0; a < N; ++a) {
        for (int b = a + 1; b < N; ++b) {
            for (int da = 0; da < N; ++da) {
                for (int db = 0; db < N; ++db) {
                    if (da == db) {
                        continue;
                    }
                    Load l{{a, da}, {b, db}};
                    auto v = oracle(w, n, l);
                    if (v.fused_segments == 1 && v.first_fusion_stage > best_stage) {
                        best = l;
                        best_stage = v.first_fusion_stage;
                    }
                }
            }
        }
    }
    for (int s = 0; s < N; ++s) {
        for (int d = 0; d < N; ++d) {
            const bool used = std::any_of(best.begin(), best.end(), [&](const auto &p) {
                return p.first == s || p.second == d;
            });
            if (used) {
                continue;
            }
            Load trial = best;
            trial.emplace_back(s, d);
            auto v = oracle(w, n, trial);
            if (v.fused_segments == 1 && !v.unsupported) {
                best = trial;
            }
        }
    }
    return best;
}

inline std::vector<Packet> load_packets(const Load &load, const std::vector<QubitSpec> &payloads = {}) {
    std::vector<Packet> out;
    for (std::size_t i = 0; i < load.size(); ++i) {
        Packet p;
        p.input_port = load[i].first;
        p.dest = static_cast<std::uint32_t>(load[i].second);
        if (i < payloads.size()) {
            p.payload = payloads[i];
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace qbanyan::test_util
