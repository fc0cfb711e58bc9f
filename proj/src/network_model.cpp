#include "c3ekd/network_model.hpp"

#include <stdexcept>

namespace c3ekd {

double transmission_delay(double size_bits, double bw_bps) {
    if (!(size_bits > 0.0) || !(bw_bps > 0.0))
        throw std::invalid_argument("transmission_delay: size and bandwidth must be positive");
    return size_bits / bw_bps;
}

double sample_delay(bool uploaded, const LinkConfig& link) {
    double d = transmission_delay(link.image_size_bits, link.bw_local_to_edge_bps) +
               link.fixed_latency_per_hop_s;
    if (uploaded)
        d += transmission_delay(link.image_size_bits, link.bw_edge_to_cloud_bps) +
             link.fixed_latency_per_hop_s;
    return d;
}

double average_delay(const DelayLedger& ledger) {
    if (ledger.count < 1)
        throw std::runtime_error("average_delay: empty ledger");
    return ledger.sum_s / static_cast<double>(ledger.count);
}

}  // namespace c3ekd
