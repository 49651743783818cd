#include "tcsched/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tcs::io {

using nlohmann::json;

json to_json(const TaskSetDescription& d)
{
	auto tasks = d.tasks;
	auto edges = d.edges;
	auto jobs = d.jobs;
	auto nodes = d.nodes;
	std::sort(tasks.begin(), tasks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
	std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
		return std::pair(a.from, a.to) < std::pair(b.from, b.to);
	});
	std::sort(jobs.begin(), jobs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
	std::sort(nodes.begin(), nodes.end());

	json j;
	j["channels"] = d.channels;
	j["nodes"] = nodes;
	j["tasks"] = json::array();
	for (const auto& t : tasks)
		j["tasks"].push_back({{"id", t.id}, {"node", t.node}, {"maxJitter", t.max_jitter}});
	j["edges"] = json::array();
	for (const auto& e : edges)
		j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"maxAge", e.max_age}});
	j["jobs"] = json::array();
	for (const auto& job : jobs) {
		auto members = job.members;
		std::sort(members.begin(), members.end());
		j["jobs"].push_back({{"id", job.id}, {"period", job.period}, {"leaf", job.leaf}, {"members", members}});
	}
	if (d.hyperperiod)
		j["hyperperiod"] = *d.hyperperiod;
	return j;
}

TaskSetDescription description_from_json(const json& j)
{
	try {
		TaskSetDescription d;
		d.channels = j.at("channels").get<int>();
		if (j.contains("nodes"))
			d.nodes = j.at("nodes").get<std::vector<NodeId>>();
		for (const auto& t : j.at("tasks"))
			d.tasks.push_back({t.at("id").get<TaskId>(), t.at("node").get<NodeId>(), t.value("maxJitter", 0)});
		for (const auto& e : j.value("edges", json::array()))
			d.edges.push_back({e.at("from").get<TaskId>(), e.at("to").get<TaskId>(), e.at("maxAge").get<int>()});
		for (const auto& job : j.at("jobs"))
			d.jobs.push_back({job.at("id").get<int>(), job.at("period").get<int>(), job.at("leaf").get<TaskId>(),
			                  job.at("members").get<std::vector<TaskId>>()});
		if (j.contains("hyperperiod"))
			d.hyperperiod = j.at("hyperperiod").get<int>();
		return d;
	} catch (const json::exception& e) {
		throw IoError(std::string("malformed taskset: ") + e.what());
	}
}

json to_json(const Schedule& s)
{
	json j;
	j["H"] = s.hyperperiod();
	j["M"] = s.channels();
	j["cells"] = json::array();
	for (const auto& p : s.placements())
		j["cells"].push_back({{"t", p.slot.time}, {"c", p.slot.channel}, {"task", p.task}});
	return j;
}

Schedule schedule_from_json(const json& j)
{
	try {
		Schedule s(j.at("H").get<int>(), j.at("M").get<int>());
		for (const auto& c : j.at("cells"))
			s.place(c.at("task").get<TaskId>(), {c.at("t").get<int>(), c.at("c").get<int>()});
		return s;
	} catch (const json::exception& e) {
		throw IoError(std::string("malformed schedule: ") + e.what());
	} catch (const std::out_of_range& e) {
		throw IoError(std::string("malformed schedule: ") + e.what());
	}
}

json to_json(const ValidationReport& r)
{
	json j;
	j["overall"] = r.overall();
	j["violations"] = json::array();
	for (const auto& v : r.violations)
		j["violations"].push_back({{"constraint", v.constraint}, {"tasks", v.tasks}, {"slots", v.slots}, {"message", v.message}});
	return j;
}

json read_json(const std::filesystem::path& path)
{
	std::ifstream in(path);
	if (!in)
		throw IoError("cannot open " + path.string());
	try {
		return json::parse(in);
	} catch (const json::exception& e) {
		throw IoError(path.string() + ": " + e.what());
	}
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
	if (path.has_parent_path())
		std::filesystem::create_directories(path.parent_path());
	std::ofstream out(path);
	if (!out)
		throw IoError("cannot write " + path.string());
	out << text;
	if (!out)
		throw IoError("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j)
{
	write_text(path, j.dump(2) + "\n");
}

TaskSet load_taskset(const std::filesystem::path& path)
{
	return TaskSet::build(description_from_json(read_json(path)));
}

void save_taskset(const std::filesystem::path& path, const TaskSet& ts)
{
	write_json(path, to_json(ts.description()));
}

Schedule load_schedule(const std::filesystem::path& path)
{
	return schedule_from_json(read_json(path));
}

void save_schedule(const std::filesystem::path& path, const Schedule& s)
{
	write_json(path, to_json(s));
}

}
