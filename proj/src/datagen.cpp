#include "c3ekd/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "c3ekd/rng.hpp"

namespace c3ekd {

namespace {

// Largest-remainder allocation of n into parts proportional to weights.
std::vector<int> allocate_counts(int n, const std::vector<double>& weights) {
    std::vector<int> counts(weights.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    int assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        double quota = n * weights[i];
        counts[i] = static_cast<int>(std::floor(quota));
        assigned += counts[i];
        remainders.emplace_back(quota - counts[i], i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int k = 0; k < n - assigned; ++k) counts[remainders[k].second] += 1;
    return counts;
}

}  // namespace

std::vector<Sample> generate_synthetic(int n, int feature_dim, std::uint64_t seed,
                                       SynthTask task, double sigma,
                                       double cluster_skew) {
    if (n < 4 || feature_dim < 2)
        throw std::invalid_argument("generate_synthetic: need n >= 4 and feature_dim >= 2");
    if (cluster_skew < 0.0 || cluster_skew > 1.0)
        throw std::invalid_argument("generate_synthetic: cluster_skew outside [0,1]");
    Rng rng(seed);
    std::vector<Sample> samples;
    samples.reserve(n);

    if (task == SynthTask::XorBlobs) {
        static const double centers[4][2] = {{1, 1}, {1, -1}, {-1, -1}, {-1, 1}};
        static const int labels[4] = {0, 1, 0, 1};
        std::vector<double> weights = {0.5 * cluster_skew, 0.5 * cluster_skew,
                                       0.5 * (1.0 - cluster_skew),
                                       0.5 * (1.0 - cluster_skew)};
        std::vector<int> counts = allocate_counts(n, weights);
        for (int cl = 0; cl < 4; ++cl) {
            for (int i = 0; i < counts[cl]; ++i) {
                Sample s;
                s.features.resize(feature_dim);
                s.features[0] = centers[cl][0] + sigma * rng.normal();
                s.features[1] = centers[cl][1] + sigma * rng.normal();
                for (int d = 2; d < feature_dim; ++d) s.features[d] = rng.normal();
                s.label = labels[cl];
                samples.push_back(std::move(s));
            }
        }
    } else {
        std::vector<int> counts = allocate_counts(n, {0.5, 0.5});
        static const double radii[2] = {1.0, 2.0};
        for (int cl = 0; cl < 2; ++cl) {
            for (int i = 0; i < counts[cl]; ++i) {
                Sample s;
                s.features.resize(feature_dim);
                double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
                double r = radii[cl] + sigma * rng.normal();
                s.features[0] = r * std::cos(theta);
                s.features[1] = r * std::sin(theta);
                for (int d = 2; d < feature_dim; ++d) s.features[d] = rng.normal();
                s.label = cl;
                samples.push_back(std::move(s));
            }
        }
    }

    rng.shuffle(samples);
    for (int i = 0; i < n; ++i) samples[i].id = i;
    return samples;
}

DatasetBundle split(const std::vector<Sample>& samples, double f_train,
                    double f_sim, double f_test, std::uint64_t seed) {
    if (std::abs(f_train + f_sim + f_test - 1.0) > 1e-9)
        throw std::invalid_argument("split: fractions must sum to 1");
    if (samples.empty())
        throw std::invalid_argument("split: empty sample list");

    const int n = static_cast<int>(samples.size());
    const int n_sim = static_cast<int>(std::floor(f_sim * n));
    const int n_test = static_cast<int>(std::floor(f_test * n));
    const int n_train = n - n_sim - n_test;

    std::vector<Sample> shuffled = samples;
    Rng rng(seed);
    rng.shuffle(shuffled);

    DatasetBundle bundle;
    bundle.feature_dim = static_cast<int>(samples.front().features.size());
    bundle.seed = seed;
    bundle.train.assign(shuffled.begin(), shuffled.begin() + n_train);
    bundle.simulation.assign(shuffled.begin() + n_train,
                             shuffled.begin() + n_train + n_sim);
    bundle.test.assign(shuffled.begin() + n_train + n_sim, shuffled.end());
    for (Sample& s : bundle.train) s.origin = "train";
    for (Sample& s : bundle.test) s.origin = "test";
    return bundle;
}

std::vector<Sample> load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);

    auto split_fields = [](const std::string& line) {
        std::vector<std::string> fields;
        std::string cur;
        std::stringstream ss(line);
        while (std::getline(ss, cur, ',')) fields.push_back(cur);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        return fields;
    };

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("load_csv: missing header in " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_fields(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "label")
        throw std::runtime_error("load_csv: header must be id,label,f1..fd in " + path);
    const int dim = static_cast<int>(header.size()) - 2;
    for (int d = 0; d < dim; ++d) {
        if (header[d + 2] != "f" + std::to_string(d + 1))
            throw std::runtime_error("load_csv: feature columns must be named f1..fd in " + path);
    }

    std::vector<Sample> samples;
    std::set<long long> seen_ids;
    long long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_fields(line);
        if (static_cast<int>(fields.size()) != dim + 2)
            throw std::runtime_error("load_csv: parse error at line " +
                                     std::to_string(line_no) + ": expected " +
                                     std::to_string(dim + 2) + " fields, got " +
                                     std::to_string(fields.size()));
        Sample s;
        try {
            std::size_t pos = 0;
            s.id = std::stoll(fields[0], &pos);
            if (pos != fields[0].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw std::runtime_error("load_csv: parse error at line " +
                                     std::to_string(line_no) + ": bad id '" + fields[0] + "'");
        }
        if (fields[1] == "0") {
            s.label = 0;
        } else if (fields[1] == "1") {
            s.label = 1;
        } else {
            throw std::runtime_error("load_csv: parse error at line " +
                                     std::to_string(line_no) + ": label must be 0 or 1, got '" +
                                     fields[1] + "'");
        }
        s.features.resize(dim);
        for (int d = 0; d < dim; ++d) {
            try {
                std::size_t pos = 0;
                s.features[d] = std::stod(fields[d + 2], &pos);
                if (pos != fields[d + 2].size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw std::runtime_error("load_csv: parse error at line " +
                                         std::to_string(line_no) + ": bad feature '" +
                                         fields[d + 2] + "'");
            }
            if (!std::isfinite(s.features[d]))
                throw std::runtime_error("load_csv: parse error at line " +
                                         std::to_string(line_no) + ": non-finite feature");
        }
        if (!seen_ids.insert(s.id).second)
            throw std::runtime_error("load_csv: duplicate id " + std::to_string(s.id) +
                                     " at line " + std::to_string(line_no));
        samples.push_back(std::move(s));
    }
    return samples;
}

}  // namespace c3ekd
