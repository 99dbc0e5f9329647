#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "jamnet/netgen.hpp"
#include "jamnet/optimal.hpp"
#include "jamnet/routing.hpp"

namespace jamnet {

// Experiment harness: parameter sweeps over freshly generated instances,
// paired per-realization comparison against the MER benchmark, throughput
// studies, and histograms. Everything is a pure function of the config
// (seed included); realizations run in parallel with split seeds and are
// reduced in index order, so outputs are byte-stable.

enum class SweepAxis {
    JammerCount,
    JammerPower,
    AreaSide,
    OutageTarget,
    JammerOnProb,
    FlowCount,
};

std::string_view axis_name(SweepAxis axis); // "jammer_count", ...
SweepAxis axis_from_name(std::string_view name);

struct ExperimentConfig {
    SweepAxis axis = SweepAxis::JammerCount;
    std::vector<double> values;
    GenSpec base;        // n, nj, side, pj, params (base.seed is ignored)
    double pi = 0.1;
    int realizations = 100;
    std::uint64_t base_seed = 1;
    std::vector<Algorithm> algorithms{Algorithm::MER, Algorithm::MER_EQ,
                                      Algorithm::MER_AP};
    bool tighten_merap = true;   // apply the power-tightening pass to MER-AP
    bool force_optimal = false;  // allow OPTIMAL beyond n = 10
    long long max_paths = 1'000'000;
    int flows = 5;       // throughput study (when axis is not flow_count)
    int set_trials = 200;
    double lambda = 1.0; // per-link capacity
    int bins = 30;       // histogram study

    void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& cfg);
void from_json(const nlohmann::json& j, ExperimentConfig& cfg);

// One row per (axis value, algorithm); column names travel with the table.
struct ResultTable {
    std::string axis_column;
    std::vector<std::string> metric_columns;
    struct Row {
        double axis_value = 0.0;
        std::string algorithm;
        std::vector<double> metrics;
    };
    std::vector<Row> rows;

    std::string to_csv() const;
};
void to_json(nlohmann::json& j, const ResultTable& table);

// 100 * (benchmark - alg) / benchmark
double energy_saved(double cost_benchmark, double cost_alg);

// 10 * log10(cost_alg / cost_optimal)
double db_gap(double cost_alg, double cost_optimal);

// Sweep the axis; per realization all algorithms see the same instance and
// savings are measured against MER on that instance. Columns:
// mean_total_power, mean_energy_saved_pct, std_energy_saved_pct, realizations.
ResultTable run_sweep(const ExperimentConfig& cfg);

// right-open bins [e_i, e_{i+1}); values outside the edges are not counted
std::vector<long long> cost_histogram(std::span<const double> costs,
                                      std::span<const double> edges);

// Route cfg.flows random flows with MER-AP and with MER, sample maximal
// transmission sets, and solve the throughput LP for each. Axis must be
// flow_count or outage_target. Columns: mean_throughput,
// mean_energy_per_bit, std_throughput, realizations.
ResultTable run_throughput_study(const ExperimentConfig& cfg);

// Total-cost histograms per algorithm over cfg.realizations instances,
// shared log-spaced edges across algorithms.
struct HistogramTable {
    std::vector<double> edges;
    struct Series {
        std::string algorithm;
        std::vector<long long> counts;
    };
    std::vector<Series> series;

    std::string to_csv() const;
};
void to_json(nlohmann::json& j, const HistogramTable& table);

HistogramTable run_histogram_study(const ExperimentConfig& cfg);

} // namespace jamnet
