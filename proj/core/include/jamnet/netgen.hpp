#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "jamnet/channel.hpp"

namespace jamnet {

// Random instance recipe: n nodes and nj jammers i.i.d. uniform on a
// side x side square, the node nearest (0,0) as source and the node
// nearest (side,side) as dest (ties to the lowest id; dest excludes the
// source so the endpoints always differ). Point pairs closer than 1e-9
// are resampled. Generation is a pure function of the spec, seed included.
struct GenSpec {
    int n = 20;
    int nj = 20;
    double side = 10.0;
    double pj = 1.0;
    ChannelParams params;
    std::uint64_t seed = 1;

    void validate() const;
};

NetworkInstance generate_instance(const GenSpec& spec);

// JSON form:
//   { "params": {"alpha","n0","gamma","q"},
//     "nodes": [{"id","x","y"}...],
//     "jammers": [{"x","y","power"}...],
//     "source", "dest" }
void to_json(nlohmann::json& j, const NetworkInstance& inst);
void from_json(const nlohmann::json& j, NetworkInstance& inst);

std::string instance_to_string(const NetworkInstance& inst); // pretty JSON + '\n'
NetworkInstance instance_from_string(const std::string& text);

void save_instance(const NetworkInstance& inst, const std::filesystem::path& path);
NetworkInstance load_instance(const std::filesystem::path& path);

} // namespace jamnet
