#include "tcsched/generator.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "tcsched/io.hpp"

namespace tcs::gen {

namespace {

// Modulo mapping keeps corpora identical across standard libraries.
class Rng {
public:
	explicit Rng(std::uint64_t seed) : engine_(seed) {}
	int uniform(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
	template <class It>
	void shuffle(It first, It last)
	{
		for (auto n = last - first; n > 1; --n)
			std::iter_swap(first + (n - 1), first + uniform(0, static_cast<int>(n - 1)));
	}

private:
	std::mt19937_64 engine_;
};

TaskSetDescription describe(const GenParams& p, TaskId id_offset, NodeId node_offset, Rng& rng)
{
	const int n = p.tasks, leaves = p.jobs, H = p.hyperperiod;
	std::vector<int> pos(n);
	std::iota(pos.begin(), pos.end(), 0);
	rng.shuffle(pos.begin(), pos.end());   // pos[k]: task at topological position k

	std::set<std::pair<int, int>> edges;   // by position
	for (int k = 0; k < n - leaves; ++k)
		edges.insert({k, rng.uniform(k + 1, n - 1)});
	while (static_cast<int>(edges.size()) < p.dependencies) {
		int a = rng.uniform(0, n - 2);
		int b = rng.uniform(a + 1, n - 1);
		edges.insert({a, b});
	}

	std::vector<std::vector<int>> parents(n);
	for (const auto& [a, b] : edges)
		parents[b].push_back(a);
	// longest path (nodes) ending at each position
	std::vector<int> depth(n, 1);
	for (int k = 0; k < n; ++k)
		for (int a : parents[k])
			depth[k] = std::max(depth[k], depth[a] + 1);

	std::vector<int> divisors;
	for (int d = 1; d <= H; ++d)
		if (H % d == 0)
			divisors.push_back(d);

	TaskSetDescription d;
	d.channels = p.channels;
	for (int v = 0; v < p.nodes; ++v)
		d.nodes.push_back(v + node_offset);

	std::vector<int> job_period;
	std::vector<std::vector<int>> job_members;
	for (int k = n - leaves; k < n; ++k) {
		std::vector<char> in(n, 0);
		in[k] = 1;
		for (int x = k; x >= 0; --x)
			if (in[x])
				for (int a : parents[x])
					in[a] = 1;
		std::vector<int> members;
		for (int x = 0; x < n; ++x)
			if (in[x])
				members.push_back(x);
		std::vector<int> eligible;
		for (int dv : divisors)
			if (dv >= depth[k])
				eligible.push_back(dv);
		int period = eligible.empty() ? H : eligible[rng.uniform(0, static_cast<int>(eligible.size()) - 1)];
		job_period.push_back(period);
		job_members.push_back(std::move(members));
	}
	if (hyperperiod(std::span<const int>(job_period)) != H) {
		auto longest = std::max_element(job_members.begin(), job_members.end(),
		                                [](const auto& a, const auto& b) { return a.size() < b.size(); });
		job_period[longest - job_members.begin()] = H;
	}

	std::vector<int> task_period(n, H);
	for (std::size_t j = 0; j < job_members.size(); ++j)
		for (int x : job_members[j])
			task_period[x] = std::min(task_period[x], job_period[j]);

	for (int k = 0; k < n; ++k) {
		TaskSpec t;
		t.id = pos[k] + id_offset;
		t.node = rng.uniform(0, p.nodes - 1) + node_offset;
		t.max_jitter = rng.uniform(p.jitter.lo, p.jitter.hi);
		d.tasks.push_back(t);
	}
	for (const auto& [a, b] : edges) {
		int hi = p.age.hi > 0 ? std::min(p.age.hi, task_period[b]) : task_period[b];
		int lo = std::min(p.age.lo, hi);
		d.edges.push_back({pos[a] + id_offset, pos[b] + id_offset, rng.uniform(lo, hi)});
	}
	for (std::size_t j = 0; j < job_members.size(); ++j) {
		JobSpec job;
		job.id = static_cast<int>(j);
		job.period = job_period[j];
		job.leaf = pos[n - leaves + static_cast<int>(j)] + id_offset;
		for (int x : job_members[j])
			job.members.push_back(pos[x] + id_offset);
		std::sort(job.members.begin(), job.members.end());
		d.jobs.push_back(std::move(job));
	}
	std::sort(d.tasks.begin(), d.tasks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
	std::sort(d.edges.begin(), d.edges.end(),
	          [](const auto& a, const auto& b) { return std::pair(a.from, a.to) < std::pair(b.from, b.to); });
	return d;
}

}

void check(const GenParams& p)
{
	auto fail = [](const std::string& m) { throw InfeasibleParams(m); };
	if (p.hyperperiod < 1 || p.tasks < 1 || p.nodes < 1 || p.channels < 1 || p.jobs < 1)
		fail("hyperperiod, task, job, node and channel counts must be positive");
	if (p.jobs > p.tasks)
		fail("more jobs than tasks");
	const long long max_edges = static_cast<long long>(p.tasks) * (p.tasks - 1) / 2;
	if (p.dependencies > max_edges)
		fail(std::to_string(p.dependencies) + " dependencies exceed the acyclic maximum " + std::to_string(max_edges));
	if (p.dependencies < p.tasks - p.jobs)
		fail(std::to_string(p.dependencies) + " dependencies cannot connect " + std::to_string(p.tasks) +
		     " tasks to " + std::to_string(p.jobs) + " leaves");
	if (p.jitter.lo < 0 || p.jitter.hi < p.jitter.lo)
		fail("invalid jitter range");
	if (p.age.lo < 1 || (p.age.hi > 0 && p.age.hi < p.age.lo))
		fail("invalid age range");
}

TaskSet generate(const GenParams& p)
{
	check(p);
	Rng rng(p.seed);
	return TaskSet::build(describe(p, 0, 0, rng));
}

std::vector<std::pair<TaskSet, TaskSet>> generate_pairs(const GenParams& p, int count)
{
	check(p);
	std::vector<std::pair<TaskSet, TaskSet>> out;
	for (int k = 0; k < count; ++k) {
		Rng rng(derive_seed(p.seed, static_cast<std::uint64_t>(k)));
		auto a = TaskSet::build(describe(p, 0, 0, rng));
		auto b = TaskSet::build(describe(p, p.tasks, 0, rng));
		out.emplace_back(std::move(a), std::move(b));
	}
	return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index)
{
	// splitmix64 step
	std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

nlohmann::json params_json(const GenParams& p)
{
	return {{"hyperperiod", p.hyperperiod}, {"dependencies", p.dependencies}, {"jobs", p.jobs},
	        {"tasks", p.tasks},             {"nodes", p.nodes},               {"channels", p.channels},
	        {"seed", p.seed},               {"jitter", {p.jitter.lo, p.jitter.hi}},
	        {"age", {p.age.lo, p.age.hi}}};
}

GenParams params_from_json(const nlohmann::json& j)
{
	GenParams p;
	p.hyperperiod = j.value("hyperperiod", p.hyperperiod);
	p.dependencies = j.value("dependencies", p.dependencies);
	p.jobs = j.value("jobs", p.jobs);
	p.tasks = j.value("tasks", p.tasks);
	p.nodes = j.value("nodes", p.nodes);
	p.channels = j.value("channels", p.channels);
	p.seed = j.value("seed", p.seed);
	if (j.contains("jitter"))
		p.jitter = {j["jitter"].at(0).get<int>(), j["jitter"].at(1).get<int>()};
	if (j.contains("age"))
		p.age = {j["age"].at(0).get<int>(), j["age"].at(1).get<int>()};
	return p;
}

Manifest make_manifest(const std::vector<GenParams>& grid, int count, bool pairs, std::uint64_t seed,
                       const std::string& prefix)
{
	if (count < 0)
		throw std::invalid_argument("negative corpus count");
	Manifest m;
	std::uint64_t index = 0;
	for (auto p : grid) {
		check(p);
		for (int k = 0; k < count; ++k, ++index) {
			p.seed = derive_seed(seed, index);
			m.entries.push_back({prefix + "-" + std::to_string(index), p, pairs});
		}
	}
	return m;
}

void save_manifest(const std::filesystem::path& path, const Manifest& m)
{
	nlohmann::json j;
	j["entries"] = nlohmann::json::array();
	for (const auto& e : m.entries)
		j["entries"].push_back({{"id", e.id}, {"pair", e.pair}, {"params", params_json(e.params)}});
	io::write_json(path, j);
}

Manifest load_manifest(const std::filesystem::path& path)
{
	auto j = io::read_json(path);
	Manifest m;
	try {
		for (const auto& e : j.at("entries"))
			m.entries.push_back({e.at("id").get<std::string>(), params_from_json(e.at("params")), e.value("pair", false)});
	} catch (const nlohmann::json::exception& e) {
		throw io::IoError(path.string() + ": malformed manifest: " + e.what());
	}
	return m;
}

}
