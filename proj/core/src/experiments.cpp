#include "jamnet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "jamnet/parallel.hpp"
#include "jamnet/rng.hpp"
#include "jamnet/scheduling.hpp"

namespace jamnet {

namespace {

constexpr double kContractTol = 1e-9;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
    int count = 0;
};

Stats summarize(const std::vector<double>& xs) {
    Stats s;
    s.count = static_cast<int>(xs.size());
    if (s.count == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / s.count;
    if (s.count > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / (s.count - 1));
    }
    return s;
}

// MER-AP without tightening only promises e2e <= pi; everything else must
// land on pi (OPTIMAL to its looser solver tolerance)
void check_contract(const RoutePlan& plan, double pi, bool merap_tightened) {
    const double tol = plan.algorithm == Algorithm::OPTIMAL ? 1e-8 : kContractTol;
    const bool upper_bound_only =
        plan.algorithm == Algorithm::MER_AP && !merap_tightened;
    if (plan.e2e_outage > pi + tol)
        throw std::runtime_error("outage contract violated: e2e above target");
    if (!upper_bound_only && plan.e2e_outage < pi - tol)
        throw std::runtime_error("outage contract violated: e2e below target");
}

RoutePlan run_algorithm(Algorithm alg, const NetworkInstance& inst, double pi,
                        const ExperimentConfig& cfg) {
    switch (alg) {
        case Algorithm::MER:
            return mer_route(inst, pi);
        case Algorithm::MER_EQ:
            return mereq_route(inst, pi);
        case Algorithm::MER_AP: {
            RoutePlan plan = merap_route(inst, pi);
            if (cfg.tighten_merap) plan = heuristic_tighten(plan, pi, inst);
            return plan;
        }
        case Algorithm::OPTIMAL: {
            PathEnumConfig pec;
            pec.max_paths = cfg.max_paths;
            return brute_force_route(inst, pi, pec);
        }
    }
    throw std::logic_error("unknown algorithm tag");
}

GenSpec spec_for_value(const ExperimentConfig& cfg, double value, double& pi) {
    GenSpec spec = cfg.base;
    pi = cfg.pi;
    switch (cfg.axis) {
        case SweepAxis::JammerCount:
            spec.nj = static_cast<int>(std::llround(value));
            break;
        case SweepAxis::JammerPower:
            spec.pj = value;
            break;
        case SweepAxis::AreaSide:
            spec.side = value;
            break;
        case SweepAxis::OutageTarget:
            pi = value;
            break;
        case SweepAxis::JammerOnProb:
            spec.params.q = value;
            break;
        case SweepAxis::FlowCount:
            throw std::domain_error("flow_count axis belongs to run_throughput_study");
    }
    return spec;
}

std::vector<Algorithm> sorted_by_name(std::vector<Algorithm> algs) {
    std::sort(algs.begin(), algs.end(), [](Algorithm a, Algorithm b) {
        return algorithm_name(a) < algorithm_name(b);
    });
    algs.erase(std::unique(algs.begin(), algs.end()), algs.end());
    return algs;
}

std::vector<std::pair<int, int>> draw_flow_endpoints(Rng& rng, int n, int flows) {
    std::set<std::pair<int, int>> used;
    std::vector<std::pair<int, int>> out;
    if (flows > n * (n - 1))
        throw std::domain_error("more flows than ordered node pairs");
    while (static_cast<int>(out.size()) < flows) {
        const int s = static_cast<int>(rng.uniform_index(n));
        const int d = static_cast<int>(rng.uniform_index(n));
        if (s == d) continue;
        if (!used.insert({s, d}).second) continue;
        out.push_back({s, d});
    }
    return out;
}

} // namespace

int default_thread_count() {
    if (const char* env = std::getenv("JAMNET_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int threads) {
    if (threads <= 0) threads = default_thread_count();
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = static_cast<int>(std::min<std::size_t>(threads, count));
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string_view axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::JammerCount: return "jammer_count";
        case SweepAxis::JammerPower: return "jammer_power";
        case SweepAxis::AreaSide: return "area_side";
        case SweepAxis::OutageTarget: return "outage_target";
        case SweepAxis::JammerOnProb: return "q";
        case SweepAxis::FlowCount: return "flow_count";
    }
    throw std::logic_error("unknown axis");
}

SweepAxis axis_from_name(std::string_view name) {
    if (name == "jammer_count") return SweepAxis::JammerCount;
    if (name == "jammer_power") return SweepAxis::JammerPower;
    if (name == "area_side") return SweepAxis::AreaSide;
    if (name == "outage_target") return SweepAxis::OutageTarget;
    if (name == "q") return SweepAxis::JammerOnProb;
    if (name == "flow_count") return SweepAxis::FlowCount;
    throw std::domain_error("unknown sweep axis: " + std::string(name));
}

void ExperimentConfig::validate() const {
    base.validate();
    if (realizations < 1) throw std::domain_error("realizations must be >= 1");
    if (!(pi >= 1e-12 && pi <= 1.0 - 1e-12))
        throw std::domain_error("pi must lie in [1e-12, 1-1e-12]");
    if (flows < 1) throw std::domain_error("flows must be >= 1");
    if (set_trials < 1) throw std::domain_error("set_trials must be >= 1");
    if (!(lambda > 0.0)) throw std::domain_error("lambda must be > 0");
    if (bins < 1) throw std::domain_error("bins must be >= 1");
    for (Algorithm a : algorithms)
        if (a == Algorithm::OPTIMAL && base.n > 10 && !force_optimal)
            throw std::domain_error(
                "OPTIMAL sweeps with n > 10 need force_optimal (enumeration cost)");
}

void to_json(nlohmann::json& j, const ExperimentConfig& cfg) {
    std::vector<std::string> algs;
    for (Algorithm a : cfg.algorithms) algs.emplace_back(algorithm_name(a));
    j = nlohmann::json{
        {"axis", std::string(axis_name(cfg.axis))},
        {"values", cfg.values},
        {"n", cfg.base.n},
        {"nj", cfg.base.nj},
        {"side", cfg.base.side},
        {"pj", cfg.base.pj},
        {"alpha", cfg.base.params.alpha},
        {"n0", cfg.base.params.n0},
        {"gamma", cfg.base.params.gamma},
        {"q", cfg.base.params.q},
        {"pi", cfg.pi},
        {"realizations", cfg.realizations},
        {"base_seed", cfg.base_seed},
        {"algorithms", algs},
        {"tighten_merap", cfg.tighten_merap},
        {"force_optimal", cfg.force_optimal},
        {"max_paths", cfg.max_paths},
        {"flows", cfg.flows},
        {"set_trials", cfg.set_trials},
        {"lambda", cfg.lambda},
        {"bins", cfg.bins},
    };
}

void from_json(const nlohmann::json& j, ExperimentConfig& cfg) {
    cfg = ExperimentConfig{};
    if (j.contains("axis")) cfg.axis = axis_from_name(j.at("axis").get<std::string>());
    if (j.contains("values")) cfg.values = j.at("values").get<std::vector<double>>();
    if (j.contains("n")) cfg.base.n = j.at("n").get<int>();
    if (j.contains("nj")) cfg.base.nj = j.at("nj").get<int>();
    if (j.contains("side")) cfg.base.side = j.at("side").get<double>();
    if (j.contains("pj")) cfg.base.pj = j.at("pj").get<double>();
    if (j.contains("alpha")) cfg.base.params.alpha = j.at("alpha").get<double>();
    if (j.contains("n0")) cfg.base.params.n0 = j.at("n0").get<double>();
    if (j.contains("gamma")) cfg.base.params.gamma = j.at("gamma").get<double>();
    if (j.contains("q")) cfg.base.params.q = j.at("q").get<double>();
    if (j.contains("pi")) cfg.pi = j.at("pi").get<double>();
    if (j.contains("realizations")) cfg.realizations = j.at("realizations").get<int>();
    if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (j.contains("algorithms")) {
        cfg.algorithms.clear();
        for (const auto& name : j.at("algorithms"))
            cfg.algorithms.push_back(algorithm_from_name(name.get<std::string>()));
    }
    if (j.contains("tighten_merap")) cfg.tighten_merap = j.at("tighten_merap").get<bool>();
    if (j.contains("force_optimal")) cfg.force_optimal = j.at("force_optimal").get<bool>();
    if (j.contains("max_paths")) cfg.max_paths = j.at("max_paths").get<long long>();
    if (j.contains("flows")) cfg.flows = j.at("flows").get<int>();
    if (j.contains("set_trials")) cfg.set_trials = j.at("set_trials").get<int>();
    if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
    if (j.contains("bins")) cfg.bins = j.at("bins").get<int>();
}

std::string ResultTable::to_csv() const {
    std::ostringstream os;
    os << axis_column << ",algorithm";
    for (const auto& m : metric_columns) os << ',' << m;
    os << '\n';
    for (const Row& row : rows) {
        os << fmt(row.axis_value) << ',' << row.algorithm;
        for (double v : row.metrics) os << ',' << fmt(v);
        os << '\n';
    }
    return os.str();
}

void to_json(nlohmann::json& j, const ResultTable& table) {
    j = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json entry{{table.axis_column, row.axis_value},
                             {"algorithm", row.algorithm}};
        for (std::size_t i = 0; i < table.metric_columns.size(); ++i)
            entry[table.metric_columns[i]] = row.metrics[i];
        j.push_back(std::move(entry));
    }
}

double energy_saved(double cost_benchmark, double cost_alg) {
    if (!(cost_benchmark > 0.0))
        throw std::domain_error("energy_saved: benchmark cost must be > 0");
    return 100.0 * (cost_benchmark - cost_alg) / cost_benchmark;
}

double db_gap(double cost_alg, double cost_optimal) {
    if (!(cost_alg > 0.0 && cost_optimal > 0.0))
        throw std::domain_error("db_gap: costs must be > 0");
    return 10.0 * std::log10(cost_alg / cost_optimal);
}

ResultTable run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.values.empty()) throw std::domain_error("run_sweep: empty axis value list");
    if (cfg.axis == SweepAxis::FlowCount)
        throw std::domain_error("flow_count axis belongs to run_throughput_study");

    const auto algs = sorted_by_name(cfg.algorithms);

    ResultTable table;
    table.axis_column = axis_name(cfg.axis);
    table.metric_columns = {"mean_total_power", "mean_energy_saved_pct",
                            "std_energy_saved_pct", "realizations"};

    std::vector<double> values = cfg.values;
    std::sort(values.begin(), values.end());
    for (double value : values) {
        double pi = cfg.pi;
        const GenSpec spec = spec_for_value(cfg, value, pi);

        struct Slot {
            std::map<Algorithm, double> totals;
            bool ok = false;
        };
        std::vector<Slot> slots(cfg.realizations);
        parallel_for(cfg.realizations, [&](std::size_t r) {
            GenSpec sr = spec;
            sr.seed = split_seed(cfg.base_seed, r);
            try {
                const NetworkInstance inst = generate_instance(sr);
                Slot slot;
                // MER is the savings benchmark on every instance
                const RoutePlan mer = mer_route(inst, pi);
                check_contract(mer, pi, false);
                slot.totals[Algorithm::MER] = mer.total_power;
                for (Algorithm a : algs) {
                    if (a == Algorithm::MER) continue;
                    const RoutePlan plan = run_algorithm(a, inst, pi, cfg);
                    check_contract(plan, pi, cfg.tighten_merap);
                    slot.totals[a] = plan.total_power;
                }
                slot.ok = true;
                slots[r] = std::move(slot);
            } catch (const std::exception&) {
                // per-realization failure: recorded (slot.ok stays false)
            }
        });

        for (Algorithm a : algs) {
            std::vector<double> totals, saved;
            for (const Slot& slot : slots) {
                if (!slot.ok) continue;
                totals.push_back(slot.totals.at(a));
                saved.push_back(
                    energy_saved(slot.totals.at(Algorithm::MER), slot.totals.at(a)));
            }
            const Stats t = summarize(totals);
            const Stats s = summarize(saved);
            table.rows.push_back({value,
                                  std::string(algorithm_name(a)),
                                  {t.mean, s.mean, s.stddev, double(t.count)}});
        }
    }
    return table;
}

std::vector<long long> cost_histogram(std::span<const double> costs,
                                      std::span<const double> edges) {
    if (edges.size() < 2) throw std::domain_error("cost_histogram: need >= 2 edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1]))
            throw std::domain_error("cost_histogram: edges must increase");
    std::vector<long long> counts(edges.size() - 1, 0);
    for (double c : costs) {
        if (c < edges.front() || c >= edges.back()) continue;
        const auto it = std::upper_bound(edges.begin(), edges.end(), c);
        counts[static_cast<std::size_t>(it - edges.begin()) - 1] += 1;
    }
    return counts;
}

ResultTable run_throughput_study(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.values.empty())
        throw std::domain_error("run_throughput_study: empty axis value list");
    if (cfg.axis != SweepAxis::FlowCount && cfg.axis != SweepAxis::OutageTarget)
        throw std::domain_error(
            "run_throughput_study: axis must be flow_count or outage_target");

    const std::vector<Algorithm> algs{Algorithm::MER_AP, Algorithm::MER};

    ResultTable table;
    table.axis_column = axis_name(cfg.axis);
    table.metric_columns = {"mean_throughput", "mean_energy_per_bit",
                            "std_throughput", "realizations"};

    std::vector<double> values = cfg.values;
    std::sort(values.begin(), values.end());
    for (double value : values) {
        const int flows =
            cfg.axis == SweepAxis::FlowCount ? static_cast<int>(std::llround(value)) : cfg.flows;
        const double pi = cfg.axis == SweepAxis::OutageTarget ? value : cfg.pi;
        if (flows < 1) throw std::domain_error("flow counts must be >= 1");

        struct Slot {
            double throughput[2] = {0.0, 0.0};
            double epb[2] = {0.0, 0.0};
            bool ok = false;
        };
        std::vector<Slot> slots(cfg.realizations);
        parallel_for(cfg.realizations, [&](std::size_t r) {
            GenSpec sr = cfg.base;
            const std::uint64_t seed_r = split_seed(cfg.base_seed, r);
            sr.seed = seed_r;
            try {
                const NetworkInstance inst = generate_instance(sr);
                Rng flow_rng(split_seed(seed_r, 0));
                const auto endpoints = draw_flow_endpoints(flow_rng, inst.size(), flows);

                Slot slot;
                for (std::size_t ai = 0; ai < algs.size(); ++ai) {
                    FlowSet fs;
                    fs.flows = endpoints;
                    fs.lambda = cfg.lambda;
                    double power = 0.0;
                    std::vector<Link> links;
                    for (const auto& [s, d] : endpoints) {
                        RoutePlan plan = algs[ai] == Algorithm::MER
                                             ? mer_route(inst, pi, s, d)
                                             : merap_route(inst, pi, s, d);
                        if (algs[ai] == Algorithm::MER_AP && cfg.tighten_merap)
                            plan = heuristic_tighten(plan, pi, inst);
                        power += plan.total_power;
                        for (std::size_t k = 0; k + 1 < plan.nodes.size(); ++k)
                            links.push_back({plan.nodes[k], plan.nodes[k + 1]});
                        fs.routes.push_back(std::move(plan));
                    }
                    const auto sets = maximal_transmission_sets(
                        links, cfg.set_trials, split_seed(seed_r, 1 + ai));
                    const auto solution = max_throughput(fs, sets);
                    slot.throughput[ai] = solution.total;
                    slot.epb[ai] = energy_per_bit(power, solution.total);
                }
                slot.ok = true;
                slots[r] = slot;
            } catch (const std::exception&) {
                // recorded as a failed realization
            }
        });

        for (std::size_t ai = 0; ai < algs.size(); ++ai) {
            std::vector<double> th, epb;
            for (const Slot& slot : slots) {
                if (!slot.ok) continue;
                th.push_back(slot.throughput[ai]);
                epb.push_back(slot.epb[ai]);
            }
            const Stats t = summarize(th);
            const Stats e = summarize(epb);
            table.rows.push_back({value,
                                  std::string(algorithm_name(algs[ai])),
                                  {t.mean, e.mean, t.stddev, double(t.count)}});
        }
    }
    // emit MER before MER-AP for a fixed axis value, as run_sweep does
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const ResultTable::Row& a, const ResultTable::Row& b) {
                         if (a.axis_value != b.axis_value) return a.axis_value < b.axis_value;
                         return a.algorithm < b.algorithm;
                     });
    return table;
}

std::string HistogramTable::to_csv() const {
    std::ostringstream os;
    os << "algorithm,bin_lo,bin_hi,count\n";
    for (const Series& s : series)
        for (std::size_t b = 0; b + 1 < edges.size(); ++b)
            os << s.algorithm << ',' << fmt(edges[b]) << ',' << fmt(edges[b + 1]) << ','
               << s.counts[b] << '\n';
    return os.str();
}

void to_json(nlohmann::json& j, const HistogramTable& table) {
    j = nlohmann::json{{"edges", table.edges}, {"series", nlohmann::json::array()}};
    for (const auto& s : table.series)
        j["series"].push_back({{"algorithm", s.algorithm}, {"counts", s.counts}});
}

HistogramTable run_histogram_study(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto algs = sorted_by_name(cfg.algorithms);

    struct Slot {
        std::map<Algorithm, double> totals;
        bool ok = false;
    };
    std::vector<Slot> slots(cfg.realizations);
    parallel_for(cfg.realizations, [&](std::size_t r) {
        GenSpec sr = cfg.base;
        sr.seed = split_seed(cfg.base_seed, r);
        try {
            const NetworkInstance inst = generate_instance(sr);
            Slot slot;
            for (Algorithm a : algs)
                slot.totals[a] = run_algorithm(a, inst, cfg.pi, cfg).total_power;
            slot.ok = true;
            slots[r] = std::move(slot);
        } catch (const std::exception&) {
        }
    });

    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const Slot& slot : slots) {
        if (!slot.ok) continue;
        for (const auto& [a, total] : slot.totals) {
            lo = std::min(lo, total);
            hi = std::max(hi, total);
        }
    }
    if (!(hi > 0.0) || !std::isfinite(lo))
        throw std::runtime_error("run_histogram_study: no successful realizations");
    if (!(hi > lo)) { // all costs identical: open up a token range
        lo *= 0.999;
        hi *= 1.001;
    }

    HistogramTable table;
    const double log_lo = std::log(lo);
    const double log_hi = std::log(hi);
    for (int b = 0; b <= cfg.bins; ++b)
        table.edges.push_back(std::exp(log_lo + (log_hi - log_lo) * b / cfg.bins));
    // pin the ends so extreme samples cannot round out of range
    table.edges.front() = lo;
    table.edges.back() = hi * (1.0 + 1e-9);

    for (Algorithm a : algs) {
        std::vector<double> costs;
        for (const Slot& slot : slots)
            if (slot.ok) costs.push_back(slot.totals.at(a));
        table.series.push_back(
            {std::string(algorithm_name(a)), cost_histogram(costs, table.edges)});
    }
    return table;
}

} // namespace jamnet
