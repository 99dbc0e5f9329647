#include "jamnet/netgen.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "jamnet/errors.hpp"
#include "jamnet/rng.hpp"

namespace jamnet {

namespace {

constexpr double kMinSeparation = 1e-9;
constexpr int kMaxResample = 1000;

// draws a point at least kMinSeparation away from everything placed so far
Point draw_point(Rng& rng, double side, const std::vector<Point>& placed) {
    for (int attempt = 0; attempt < kMaxResample; ++attempt) {
        Point p{rng.uniform(side), rng.uniform(side)};
        bool clear = true;
        for (const Point& other : placed) {
            if (distance(p, other) < kMinSeparation) {
                clear = false;
                break;
            }
        }
        if (clear) return p;
    }
    throw std::runtime_error("generate_instance: resampling cap reached (degenerate spec?)");
}

int nearest_node(const std::vector<Node>& nodes, const Point& corner, int exclude) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (const Node& node : nodes) {
        if (node.id == exclude) continue;
        const double d = distance(node.pos, corner);
        if (d < best_d) { // strict: ties keep the lowest id
            best_d = d;
            best = node.id;
        }
    }
    return best;
}

const nlohmann::json& require_field(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(std::string("instance file: missing \"") + key + "\" key");
    return *it;
}

// line/column of a byte offset, for parse diagnostics
std::string line_context(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::ostringstream os;
    os << "line " << line << ", column " << col;
    return os.str();
}

} // namespace

void GenSpec::validate() const {
    if (n < 2) throw std::domain_error("GenSpec: n must be >= 2");
    if (nj < 0) throw std::domain_error("GenSpec: nj must be >= 0");
    if (!(side > 0.0)) throw std::domain_error("GenSpec: side must be > 0");
    if (!(pj > 0.0)) throw std::domain_error("GenSpec: pj must be > 0");
    params.validate();
}

NetworkInstance generate_instance(const GenSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    NetworkInstance inst;
    inst.params = spec.params;
    std::vector<Point> placed;
    placed.reserve(spec.n + spec.nj);

    for (int i = 0; i < spec.n; ++i) {
        Point p = draw_point(rng, spec.side, placed);
        placed.push_back(p);
        inst.nodes.push_back({i, p});
    }
    for (int i = 0; i < spec.nj; ++i) {
        Point p = draw_point(rng, spec.side, placed);
        placed.push_back(p);
        inst.jammers.push_back({p, spec.pj});
    }

    inst.source = nearest_node(inst.nodes, {0.0, 0.0}, -1);
    inst.dest = nearest_node(inst.nodes, {spec.side, spec.side}, inst.source);
    inst.validate();
    return inst;
}

void to_json(nlohmann::json& j, const NetworkInstance& inst) {
    j = nlohmann::json{
        {"params",
         {{"alpha", inst.params.alpha},
          {"n0", inst.params.n0},
          {"gamma", inst.params.gamma},
          {"q", inst.params.q}}},
        {"nodes", nlohmann::json::array()},
        {"jammers", nlohmann::json::array()},
        {"source", inst.source},
        {"dest", inst.dest},
    };
    for (const Node& node : inst.nodes)
        j["nodes"].push_back({{"id", node.id}, {"x", node.pos.x}, {"y", node.pos.y}});
    for (const Jammer& jam : inst.jammers)
        j["jammers"].push_back({{"x", jam.pos.x}, {"y", jam.pos.y}, {"power", jam.power}});
}

void from_json(const nlohmann::json& j, NetworkInstance& inst) {
    try {
        const auto& params = require_field(j, "params");
        inst.params.alpha = require_field(params, "alpha").get<double>();
        inst.params.n0 = require_field(params, "n0").get<double>();
        inst.params.gamma = require_field(params, "gamma").get<double>();
        inst.params.q = require_field(params, "q").get<double>();

        inst.nodes.clear();
        for (const auto& entry : require_field(j, "nodes"))
            inst.nodes.push_back({require_field(entry, "id").get<int>(),
                                  {require_field(entry, "x").get<double>(),
                                   require_field(entry, "y").get<double>()}});
        inst.jammers.clear();
        for (const auto& entry : require_field(j, "jammers"))
            inst.jammers.push_back({{require_field(entry, "x").get<double>(),
                                     require_field(entry, "y").get<double>()},
                                    require_field(entry, "power").get<double>()});
        inst.source = require_field(j, "source").get<int>();
        inst.dest = require_field(j, "dest").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("instance file: ") + e.what());
    }
    try {
        inst.validate();
    } catch (const std::domain_error& e) {
        throw ParseError(std::string("instance file: ") + e.what());
    }
}

std::string instance_to_string(const NetworkInstance& inst) {
    nlohmann::json j = inst;
    return j.dump(2) + "\n";
}

NetworkInstance instance_from_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("instance file: parse error at " + line_context(text, e.byte) +
                         ": " + e.what());
    }
    return j.get<NetworkInstance>();
}

void save_instance(const NetworkInstance& inst, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << instance_to_string(inst);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

NetworkInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return instance_from_string(buf.str());
}

} // namespace jamnet
