#pragma once

#include <cstdint>

namespace c3ekd {

// Link parameters. Image size defaults to 30 kB with 1 kB = 1000 bytes, so
// 30 * 1000 * 8 = 240,000 bits; bandwidths default to 5 Mbps (camera to edge)
// and 20 Mbps (edge to cloud). fixed_latency_per_hop_s is an extra per-hop
// constant for sensitivity experiments; the default of 0 keeps delays purely
// transmission-based.
struct LinkConfig {
    double image_size_bits = 240000.0;
    double bw_local_to_edge_bps = 5e6;
    double bw_edge_to_cloud_bps = 20e6;
    double fixed_latency_per_hop_s = 0.0;
};

// size_bits / bw_bps, in seconds. Throws std::invalid_argument unless both
// arguments are positive.
double transmission_delay(double size_bits, double bw_bps);

// Camera-to-edge leg always; edge-to-cloud leg added iff uploaded.
double sample_delay(bool uploaded, const LinkConfig& link);

// Running sum/count of per-sample transmission delays.
struct DelayLedger {
    double sum_s = 0.0;
    long long count = 0;

    void add(double delay_s) {
        sum_s += delay_s;
        ++count;
    }
};

// sum / count. Throws std::runtime_error on an empty ledger.
double average_delay(const DelayLedger& ledger);

}  // namespace c3ekd
