#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tcsched/taskset.hpp"

namespace tcs::gen {

struct Range {
	int lo = 0;
	int hi = 0;
};

struct GenParams {
	int hyperperiod = 12;
	int dependencies = 9;
	int jobs = 3;
	int tasks = 8;
	int nodes = 8;
	int channels = 3;
	std::uint64_t seed = 1;
	Range jitter{0, 2};
	// Max age of an edge is drawn from [lo, min(hi, P_child)]; hi <= 0 means P_child.
	Range age{1, 0};
};

class InfeasibleParams : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

// Throws InfeasibleParams when the counts cannot be met.
void check(const GenParams& p);

TaskSet generate(const GenParams& p);

// Pairs of tasksets with the same shape: equal hyperperiod, job count and
// node count. Both members draw from the same node ids; the second member
// uses task ids disjoint from the first.
std::vector<std::pair<TaskSet, TaskSet>> generate_pairs(const GenParams& p, int count);

// Seed of the i-th corpus member derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct ManifestEntry {
	std::string id;
	GenParams params;
	bool pair = false;
};

struct Manifest {
	std::vector<ManifestEntry> entries;
};

nlohmann::json params_json(const GenParams& p);
// Missing keys keep their defaults.
GenParams params_from_json(const nlohmann::json& j);

// `count` entries per grid point, seeds derived from `seed` and a running
// index, ids "<prefix>-<index>". Each grid point is checked first.
Manifest make_manifest(const std::vector<GenParams>& grid, int count, bool pairs, std::uint64_t seed,
                       const std::string& prefix = "ts");

void save_manifest(const std::filesystem::path& path, const Manifest& m);
Manifest load_manifest(const std::filesystem::path& path);

}
