#include "tcsched/validator.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace tcs {

bool ValidationReport::violates(int constraint) const
{
	return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.constraint == constraint; });
}

std::string ValidationReport::summary() const
{
	if (overall())
		return "valid";
	std::ostringstream os;
	os << violations.size() << " violation(s)";
	for (const auto& v : violations)
		os << "\n  C" << v.constraint << ": " << v.message;
	return os.str();
}

namespace check {

ExecutionTimes execution_times(const Schedule& schedule, const TaskSet& ts)
{
	ExecutionTimes times(ts.size());
	for (const auto& p : schedule.placements()) {
		auto i = ts.find(p.task);
		if (!i)
			throw ValidationError(ValidationErrorKind::UnknownTask, "schedule holds unknown task " + std::to_string(p.task));
		times[*i].push_back(p.slot.time);
	}
	for (auto& t : times)
		std::sort(t.begin(), t.end());
	return times;
}

int latest_before(const std::vector<int>& times, int time)
{
	auto it = std::lower_bound(times.begin(), times.end(), time);
	return it == times.begin() ? 0 : *(it - 1);
}

bool path_consistent(const TaskSet& ts, std::size_t job_index, const ExecutionTimes& times, std::vector<Violation>* out)
{
	const auto& job = ts.jobs()[job_index];
	const auto& order = ts.topological_order();
	bool ok = true;
	std::vector<std::vector<int>> used(ts.size());
	for (int leaf_time : times[job.leaf]) {
		for (auto m : job.members)
			used[m].clear();
		used[job.leaf].push_back(leaf_time);
		for (auto it = order.rbegin(); it != order.rend(); ++it) {
			auto child = *it;
			if (!job.contains(child) || used[child].empty())
				continue;
			for (const auto& p : ts.parents(child)) {
				for (int t : used[child]) {
					int u = latest_before(times[p.task], t);
					if (u > 0 && std::find(used[p.task].begin(), used[p.task].end(), u) == used[p.task].end())
						used[p.task].push_back(u);
				}
			}
		}
		for (auto m : job.members) {
			if (used[m].size() <= 1)
				continue;
			ok = false;
			if (!out)
				return false;
			std::sort(used[m].begin(), used[m].end());
			Violation v;
			v.constraint = 5;
			v.tasks = {ts.id(m), ts.id(job.leaf)};
			v.slots = used[m];
			v.slots.push_back(leaf_time);
			std::ostringstream os;
			os << "job " << job.spec.id << " instance ending at slot " << leaf_time << " uses " << used[m].size()
			   << " different executions of task " << ts.id(m);
			v.message = os.str();
			out->push_back(std::move(v));
		}
	}
	return ok;
}

bool jitter_ok(const std::vector<int>& times, int period, int jitter, int hyperperiod, std::vector<Violation>* out, TaskId id)
{
	const std::size_t n = times.size();
	if (n < 2)
		return true;
	std::vector<int> gaps(n);
	for (std::size_t i = 0; i + 1 < n; ++i)
		gaps[i] = times[i + 1] - times[i];
	gaps[n - 1] = times[0] + hyperperiod - times[n - 1];
	bool ok = true;
	auto report = [&](std::vector<int> slots, std::string msg) {
		ok = false;
		if (out)
			out->push_back({7, {id}, std::move(slots), std::move(msg)});
	};
	for (std::size_t i = 0; i < n; ++i) {
		if (std::abs(gaps[i] - period) > jitter) {
			int a = times[i], b = times[(i + 1) % n];
			report({a, b}, "task " + std::to_string(id) + " period " + std::to_string(gaps[i]) + " between slots " +
			       std::to_string(a) + " and " + std::to_string(b) + " deviates from " + std::to_string(period) +
			       " by more than " + std::to_string(jitter));
			if (!out)
				return false;
		}
	}
	const std::size_t pairs = n == 2 ? 1 : n;
	for (std::size_t i = 0; i < pairs; ++i) {
		int g1 = gaps[i], g2 = gaps[(i + 1) % n];
		if (std::abs(g2 - g1) > jitter) {
			report({times[i], times[(i + 1) % n], times[(i + 2) % n]},
			       "task " + std::to_string(id) + " consecutive periods " + std::to_string(g1) + " and " +
			       std::to_string(g2) + " differ by more than " + std::to_string(jitter));
			if (!out)
				return false;
		}
	}
	return ok;
}

}

ValidationReport validate(const Schedule& schedule, const TaskSet& ts)
{
	const int H = ts.hyperperiod();
	if (schedule.hyperperiod() != H || schedule.channels() != ts.channels())
		throw ValidationError(ValidationErrorKind::DimensionMismatch,
		                      "schedule is " + std::to_string(schedule.hyperperiod()) + "x" +
		                      std::to_string(schedule.channels()) + ", taskset needs " + std::to_string(H) + "x" +
		                      std::to_string(ts.channels()));
	ValidationReport report;
	auto& out = report.violations;
	const auto times = check::execution_times(schedule, ts);

	for (int t = 1; t <= H; ++t)
		for (int c = 1; c <= schedule.channels(); ++c) {
			auto occ = schedule.occupants({t, c});
			if (occ.size() > 1)
				out.push_back({1, {occ.begin(), occ.end()}, {t},
				               "slot (" + std::to_string(t) + ", " + std::to_string(c) + ") holds " +
				               std::to_string(occ.size()) + " tasks"});
		}

	for (int t = 1; t <= H; ++t) {
		auto here = schedule.tasks_at(t);
		std::vector<std::size_t> idx;
		for (auto id : here)
			idx.push_back(ts.index_of(id));
		for (std::size_t a = 0; a < idx.size(); ++a)
			for (std::size_t b = a + 1; b < idx.size(); ++b)
				if (ts.intersects(idx[a], idx[b])) {
					std::string what = idx[a] == idx[b] ? "runs twice in" : "intersects " + std::to_string(here[b]) + " in";
					out.push_back({2, {here[a], here[b]}, {t},
					               "task " + std::to_string(here[a]) + " " + what + " time-slot " + std::to_string(t)});
				}
	}

	for (std::size_t child = 0; child < ts.size(); ++child) {
		const int P = ts.period(child);
		for (const auto& p : ts.parents(child)) {
			for (int t : times[child]) {
				int window_start = ((t - 1) / P) * P + 1;
				int u = check::latest_before(times[p.task], t);
				std::string pair = std::to_string(ts.id(p.task)) + " -> " + std::to_string(ts.id(child));
				if (u == 0 || u < window_start)
					out.push_back({3, {ts.id(p.task), ts.id(child)}, {t},
					               "dependency " + pair + ": no execution of " + std::to_string(ts.id(p.task)) +
					               " in slots " + std::to_string(window_start) + ".." + std::to_string(t - 1)});
				else if (t - u > p.max_age)
					out.push_back({4, {ts.id(p.task), ts.id(child)}, {u, t},
					               "dependency " + pair + ": age " + std::to_string(t - u) + " exceeds " +
					               std::to_string(p.max_age)});
			}
		}
	}

	for (std::size_t j = 0; j < ts.jobs().size(); ++j)
		check::path_consistent(ts, j, times, &out);

	for (std::size_t i = 0; i < ts.size(); ++i) {
		const int P = ts.period(i);
		for (int w = 0; w < H / P; ++w) {
			int lo = w * P + 1, hi = (w + 1) * P;
			auto count = std::count_if(times[i].begin(), times[i].end(), [&](int t) { return t >= lo && t <= hi; });
			if (count != 1)
				out.push_back({6, {ts.id(i)}, {lo, hi},
				               "task " + std::to_string(ts.id(i)) + " runs " + std::to_string(count) +
				               " times in slots " + std::to_string(lo) + ".." + std::to_string(hi)});
		}
		check::jitter_ok(times[i], P, ts.jitter(i), H, &out, ts.id(i));
	}
	return report;
}

ValidationReport validate_transition(const Schedule& old, const Schedule& next, const TaskSet& merged)
{
	if (next.hyperperiod() != merged.hyperperiod() || next.channels() != merged.channels())
		throw ValidationError(ValidationErrorKind::DimensionMismatch, "new schedule does not match the merged taskset");
	ValidationReport report;
	std::map<TaskId, std::vector<int>> old_times, new_times;
	for (const auto& p : old.placements())
		old_times[p.task].push_back(p.slot.time);
	for (const auto& p : next.placements()) {
		if (!merged.find(p.task))
			throw ValidationError(ValidationErrorKind::TaskMissing,
			                      "task " + std::to_string(p.task) + " of the new schedule has no jitter bound");
		new_times[p.task].push_back(p.slot.time);
	}
	for (auto& [id, ot] : old_times) {
		auto idx = merged.find(id);
		auto nt = new_times.find(id);
		if (!idx || nt == new_times.end())
			continue;
		int last_old = *std::max_element(ot.begin(), ot.end());
		int first_new = *std::min_element(nt->second.begin(), nt->second.end());
		int gap = old.hyperperiod() + first_new - last_old;
		int P = merged.period(*idx), J = merged.jitter(*idx);
		if (std::abs(gap - P) > J)
			report.violations.push_back({8, {id}, {last_old, first_new},
			                             "task " + std::to_string(id) + " switch period " + std::to_string(gap) +
			                             " deviates from " + std::to_string(P) + " by more than " + std::to_string(J)});
	}
	return report;
}

}
