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


// Two packets collide inside an 8x8 omega fabric. The classical fabric blocks;
// the fusion fabric carries both in one photon across the shared link and
// splits them where their addresses diverge.

#include <cstdio>
#include <vector>

#include "qbanyan/banyan.hpp"

using namespace qbanyan;

namespace {

void print_route(const RouteResult &r) {
    std::printf("  status %s, success probability %.6g\n", to_string(r.status), r.success_probability);
    for (const auto &s : r.settings) {
        if (s.role == UnitRole::Idle) {
            continue;
        }
        auto list = [](const std::vector<int> &v) {
            std::string out;
            for (int p : v) {
                out += (out.empty() ? "" : "+") + std::to_string(p);
            }
            return out.empty() ? std::string("-") : out;
        };
        std::printf("  stage %d switch %d  %-15s in %s/%s  out %s/%s\n", s.stage, s.index, to_string(s.role),
                    list(s.in_packets[0]).c_str(), list(s.in_packets[1]).c_str(), list(s.out_packets[0]).c_str(),
                    list(s.out_packets[1]).c_str());
    }
    if (r.conflict && r.status != RouteStatus::Delivered) {
        std::printf("  stopped at stage %d switch %d\n", r.conflict->stage, r.conflict->index);
    }
}

}  // namespace

int main() {
    const BanyanTopology topo = build_topology(8, Wiring::OmegaShuffle);
    Rng rng(2026);

    // Search for two packets whose paths first share a link after stage 2.
    std::vector<Packet> packets;
    for (int a = 0; a < 8 && packets.empty(); ++a) {
        for (int b = a + 1; b < 8 && packets.empty(); ++b) {
            for (std::uint32_t da = 0; da < 8 && packets.empty(); ++da) {
                for (std::uint32_t db = 0; db < 8 && packets.empty(); ++db) {
                    if (da == db) {
                        continue;
                    }
                    const std::vector<Packet> trial{{a, da, QubitSpec::random(rng)}, {b, db, QubitSpec::random(rng)}};
                    const RouteResult r = plan_route(trial, topo, RouteMode::QuantumFusion);
                    if (!r.fused_segments.empty() && r.fused_segments[0].fused_at_stage == 2) {
                        packets = trial;
                    }
                }
            }
        }
    }

    for (const auto &p : packets) {
        std::printf("packet from input %d to output %u\n", p.input_port, p.dest);
    }
    std::printf("classical fabric:\n");
    print_route(route(packets, topo, RouteMode::Classical));
    std::printf("fusion fabric:\n");
    const RouteResult q = route(packets, topo, RouteMode::QuantumFusion);
    print_route(q);
    for (const auto &[port, d] : q.delivered) {
        const QubitSpec &sent = packets[d.packet == packets[0].input_port ? 0 : 1].payload;
        const QubitSpec &got = d.payload.qubit();
        std::printf("  output %d: packet %d, sent (%.3f%+.3fi, %.3f%+.3fi) received (%.3f%+.3fi, %.3f%+.3fi)\n", port,
                    d.packet, sent.h().real(), sent.h().imag(), sent.v().real(), sent.v().imag(), got.h().real(),
                    got.h().imag(), got.v().real(), got.v().imag());
    }

    // Heralds are probabilistic: sample the same instance many times.
    int ok = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) {
        Rng trial_rng = stream_rng(7, static_cast<std::uint64_t>(i));
        ok += route(packets, topo, RouteMode::QuantumFusion, trial_rng).status == RouteStatus::Delivered;
    }
    std::printf("sampled delivery rate %.6f over %d trials (analytic %.6f)\n", static_cast<double>(ok) / trials, trials,
                q.success_probability);
    return 0;
}
