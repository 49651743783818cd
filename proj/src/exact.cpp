#include "tcsched/exact.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace tcs {

const char* to_string(Status s)
{
	switch (s) {
	case Status::Feasible: return "Feasible";
	case Status::Infeasible: return "Infeasible";
	case Status::TimedOut: return "TimedOut";
	case Status::Unschedulable: return "Unschedulable";
	}
	return "?";
}

}

namespace tcs::exact {

long long slot_change_pairs(const TaskSet& ts)
{
	long long n = 0;
	for (std::size_t i = 0; i < ts.size(); ++i)
		n += ts.executions_per_hyperperiod(i) - 1;
	return n;
}

long long slot_changes(const Schedule& s, const TaskSet& ts)
{
	long long changes = 0;
	const int H = s.hyperperiod();
	for (std::size_t i = 0; i < ts.size(); ++i) {
		const int P = ts.period(i);
		for (int t = 1; t + P <= H; ++t)
			changes += s.occupies(ts.id(i), t) != s.occupies(ts.id(i), t + P);
	}
	return changes;
}

double slot_change_objective(const Schedule& s, const TaskSet& ts)
{
	const long long n = slot_change_pairs(ts);
	return n == 0 ? 0.0 : static_cast<double>(slot_changes(s, ts)) / static_cast<double>(n);
}

namespace {

using Clock = std::chrono::steady_clock;

int floor_div(int a, int b)
{
	int q = a / b;
	return (a % b != 0 && a < 0) ? q - 1 : q;
}

int ceil_div(int a, int b)
{
	return -floor_div(-a, b);
}

// Extra constraints when rescheduling a merged taskset.
struct Adaptation {
	std::vector<std::vector<int>> combined;        // per task, ascending
	std::vector<std::vector<int>> combined_from;   // per task, #combined times >= t (size H+2)
	std::vector<std::vector<char>> in_combined;    // per task, per time
	std::vector<int> first_lo, first_hi;           // first execution window per task
	// deadline[t]: (task, earliest admissible time) of windows [s-J, s+J] closing at t
	std::vector<std::vector<std::pair<std::size_t, int>>> deadline;
	std::vector<std::vector<int>> preferred_channel;   // per task per time, 0 if none
	long long upper = 0;
};

class Search {
public:
	Search(const TaskSet& ts, const SolveOptions& opt, const Adaptation* adapt)
	: ts_(ts), opt_(opt), adapt_(adapt), n_(ts.size()), H_(ts.hyperperiod()), M_(ts.channels())
	{
		period_.resize(n_);
		jitter_.resize(n_);
		windows_.resize(n_);
		for (std::size_t i = 0; i < n_; ++i) {
			period_[i] = ts.period(i);
			jitter_[i] = ts.jitter(i);
			windows_[i] = H_ / period_[i];
		}
		exec_.resize(n_);
		used_.resize(n_);
		est_.resize(n_);

		std::vector<int> slack(n_);
		for (std::size_t i = 0; i < n_; ++i) {
			int s = std::min(period_[i], 2 * jitter_[i] + 1);
			for (const auto& p : ts.parents(i))
				s = std::min(s, p.max_age);
			slack[i] = s;
		}
		order_.resize(n_);
		std::iota(order_.begin(), order_.end(), std::size_t{0});
		if (opt.seed != 0) {
			std::mt19937_64 rng(opt.seed);
			std::shuffle(order_.begin(), order_.end(), rng);
		}
		std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
			return std::pair(slack[a], period_[a]) < std::pair(slack[b], period_[b]);
		});

		for (std::size_t j = 0; j < ts.jobs().size(); ++j) {
			const auto& job = ts.jobs()[j];
			std::vector<std::size_t> rev;
			const auto& topo = ts.topological_order();
			for (auto it = topo.rbegin(); it != topo.rend(); ++it)
				if (job.contains(*it))
					rev.push_back(*it);
			job_members_rev_.push_back(std::move(rev));
		}
		leaf_jobs_.resize(n_);
		for (std::size_t j = 0; j < ts.jobs().size(); ++j)
			leaf_jobs_[ts.jobs()[j].leaf].push_back(j);
		if (adapt_)
			best_stability_ = -1;
	}

	SolveOutcome run()
	{
		start_ = Clock::now();
		SolveOutcome out;
		if (n_ == 0) {
			out.status = Status::Feasible;
			out.schedule = Schedule(H_, M_);
			out.objective_value = 0;
			out.stats.optimal = true;
			return out;
		}
		aborted_ = false;
		slot(1);
		out.stats.nodes = nodes_;
		out.stats.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
		if (has_best_) {
			out.schedule = build_schedule();
			switch (opt_.objective) {
			case Objective::None: out.objective_value = 0; break;
			case Objective::MinimizeSlotChanges: {
				long long pairs = slot_change_pairs(ts_);
				out.objective_value = pairs == 0 ? 0.0 : static_cast<double>(best_cost_) / static_cast<double>(pairs);
				break;
			}
			case Objective::MaximizeStability: out.objective_value = static_cast<double>(best_stability_); break;
			}
		}
		if (aborted_ && !proven_) {
			out.status = Status::TimedOut;
			out.message = timed_out_ ? "time budget exhausted" : "node limit reached";
		} else if (has_best_) {
			out.status = Status::Feasible;
			out.stats.optimal = true;
		} else {
			out.status = Status::Infeasible;
		}
		return out;
	}

private:
	bool pending(std::size_t i, int t) const
	{
		const int ws = ((t - 1) / period_[i]) * period_[i] + 1;
		return exec_[i].empty() || exec_[i].back() < ws;
	}

	// Admissible range of the task's next execution given its history.
	// Returns false when the task has no execution left in the hyperperiod.
	bool next_window(std::size_t i, int t, int& lo, int& hi, int& ws) const
	{
		const int P = period_[i], J = jitter_[i], W = windows_[i];
		int w = (t - 1) / P;
		const auto& e = exec_[i];
		if (!e.empty() && e.back() >= w * P + 1)
			++w;
		if (w >= W)
			return false;
		ws = w * P + 1;
		lo = ws;
		hi = (w + 1) * P;
		const std::size_t k = e.size();
		if (k >= 1) {
			const int prev = e.back();
			lo = std::max(lo, prev + P - J);
			hi = std::min(hi, prev + P + J);
			if (k >= 2) {
				const int g = prev - e[k - 2];
				lo = std::max(lo, prev + g - J);
				hi = std::min(hi, prev + g + J);
			}
			if (w == W - 1) {
				const int e1 = e.front();
				lo = std::max(lo, e1 + H_ - P - J);
				hi = std::min(hi, e1 + H_ - P + J);
				lo = std::max(lo, ceil_div(e1 + H_ + prev - J, 2));
				hi = std::min(hi, floor_div(e1 + H_ + prev + J, 2));
				if (W >= 3) {
					const int e2 = e[1];
					lo = std::max(lo, 2 * e1 + H_ - e2 - J);
					hi = std::min(hi, 2 * e1 + H_ - e2 + J);
				}
			}
		}
		if (w == 0 && adapt_) {
			lo = std::max(lo, adapt_->first_lo[i]);
			hi = std::min(hi, adapt_->first_hi[i]);
		}
		return true;
	}

	static int latest_before(const std::vector<int>& e, int t)
	{
		auto it = std::lower_bound(e.begin(), e.end(), t);
		return it == e.begin() ? 0 : *std::prev(it);
	}

	bool parents_ok(std::size_t i, int t) const
	{
		const int ws = ((t - 1) / period_[i]) * period_[i] + 1;
		for (const auto& p : ts_.parents(i)) {
			const int u = latest_before(exec_[p.task], t);
			if (u == 0 || u < ws || t - u > p.max_age)
				return false;
		}
		return true;
	}

	bool paths_ok(std::size_t leaf, int t)
	{
		for (auto j : leaf_jobs_[leaf]) {
			const auto& members = job_members_rev_[j];
			for (auto m : members)
				used_[m].clear();
			used_[leaf].push_back(t);
			for (auto child : members) {
				if (used_[child].empty())
					continue;
				for (const auto& p : ts_.parents(child))
					for (int s : used_[child]) {
						const int u = latest_before(exec_[p.task], s);
						auto& up = used_[p.task];
						if (u > 0 && std::find(up.begin(), up.end(), u) == up.end()) {
							up.push_back(u);
							if (up.size() > 1)
								return false;
						}
					}
			}
		}
		return true;
	}

	bool slot_admits(std::size_t i) const
	{
		if (static_cast<int>(here_.size()) >= M_)
			return false;
		for (auto k : here_)
			if (ts_.intersects(i, k))
				return false;
		return true;
	}

	bool uncovered_deadline(std::size_t i, int t) const
	{
		if (!adapt_)
			return false;
		for (const auto& [task, from] : adapt_->deadline[t])
			if (task == i && (exec_[i].empty() || exec_[i].back() < from))
				return true;
		return false;
	}

	bool include_first(std::size_t i, int t, int hi) const
	{
		switch (opt_.objective) {
		case Objective::None:
			return true;
		case Objective::MinimizeSlotChanges:
			return exec_[i].empty() || t >= exec_[i].back() + period_[i];
		case Objective::MaximizeStability: {
			if (adapt_->in_combined[i][t])
				return true;
			for (int s : adapt_->combined[i])
				if (s > t && s <= hi)
					return false;
			return true;
		}
		}
		return true;
	}

	bool out_of_budget()
	{
		if (aborted_)
			return true;
		if (opt_.node_limit && nodes_ >= opt_.node_limit) {
			aborted_ = true;
			return true;
		}
		if ((nodes_ & 1023) == 0) {
			double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
			if (elapsed > opt_.time_budget_s) {
				aborted_ = timed_out_ = true;
				return true;
			}
		}
		return false;
	}

	// Lower bounds on each task's next execution, propagated through parents.
	bool lookahead(int t)
	{
		static constexpr int never = INT_MAX / 2;
		for (auto i : ts_.topological_order()) {
			int lo, hi, ws;
			if (!next_window(i, t, lo, hi, ws)) {
				est_[i] = never;
				continue;
			}
			int e = std::max(t, lo);
			for (const auto& p : ts_.parents(i)) {
				const int u = exec_[p.task].empty() ? 0 : exec_[p.task].back();
				if (u == 0 || u < ws || e - u > p.max_age)
					e = std::max(e, est_[p.task] + 1);
			}
			if (e > hi)
				return false;
			est_[i] = e;
		}
		return true;
	}

	bool bounded_out()
	{
		if (!has_best_)
			return false;
		const int t = current_t_;
		if (opt_.objective == Objective::MinimizeSlotChanges) {
			long long lb = cost_;
			for (std::size_t i = 0; i < n_; ++i)
				if (!exec_[i].empty() && exec_[i].back() + period_[i] < t && pending(i, t))
					++lb;
			return lb >= best_cost_;
		}
		if (opt_.objective == Objective::MaximizeStability) {
			long long ub = stability_;
			for (std::size_t i = 0; i < n_; ++i) {
				const auto& from = adapt_->combined_from[i];
				ub += from[t];
				if (!pending(i, t)) {
					const int we = ((t - 1) / period_[i] + 1) * period_[i];
					ub -= from[t] - from[std::min(we + 1, H_ + 1)];
				}
			}
			return ub <= best_stability_;
		}
		return false;
	}

	// Returns true when the search must stop.
	bool slot(int t)
	{
		if (t > H_) {
			record();
			return proven_;
		}
		current_t_ = t;
		if (!lookahead(t) || bounded_out())
			return false;
		here_.clear();
		return decide(t, 0);
	}

	bool decide(int t, std::size_t pos)
	{
		++nodes_;
		if (out_of_budget())
			return true;
		if (pos == n_)
			return finish_slot(t);
		const std::size_t i = order_[pos];
		if (!pending(i, t))
			return decide(t, pos + 1);
		int lo, hi, ws;
		if (!next_window(i, t, lo, hi, ws))
			return false;
		if (t > hi)
			return false;
		const bool forced = t == hi || uncovered_deadline(i, t);
		const bool can = t >= lo && slot_admits(i) && parents_ok(i, t) &&
		                 (leaf_jobs_[i].empty() || paths_ok(i, t));
		if (forced && !can)
			return false;
		bool options[2];
		int count = 0;
		if (can && forced) {
			options[count++] = true;
		} else if (!can) {
			options[count++] = false;
		} else {
			bool first = include_first(i, t, hi);
			options[count++] = first;
			options[count++] = !first;
		}
		for (int k = 0; k < count; ++k) {
			bool stop;
			if (options[k]) {
				exec_[i].push_back(t);
				here_.push_back(i);
				if (adapt_ && adapt_->in_combined[i][t])
					++stability_;
				stop = decide(t, pos + 1);
				if (adapt_ && adapt_->in_combined[i][t])
					--stability_;
				here_.pop_back();
				exec_[i].pop_back();
			} else {
				stop = decide(t, pos + 1);
			}
			if (stop)
				return true;
		}
		return false;
	}

	bool finish_slot(int t)
	{
		if (adapt_)
			for (const auto& [task, from] : adapt_->deadline[t])
				if (exec_[task].empty() || exec_[task].back() < from)
					return false;
		long long delta = 0;
		if (opt_.objective == Objective::MinimizeSlotChanges) {
			for (std::size_t i = 0; i < n_; ++i) {
				const int P = period_[i];
				if (t - P < 1)
					continue;
				const auto& e = exec_[i];
				const bool now = !e.empty() && e.back() == t;
				const bool before = std::binary_search(e.begin(), e.end(), t - P);
				delta += now != before;
			}
			cost_ += delta;
		}
		auto saved = here_;
		bool stop = slot(t + 1);
		here_ = std::move(saved);
		current_t_ = t;
		cost_ -= delta;
		return stop;
	}

	void record()
	{
		switch (opt_.objective) {
		case Objective::None:
			proven_ = true;
			break;
		case Objective::MinimizeSlotChanges:
			if (has_best_ && cost_ >= best_cost_)
				return;
			best_cost_ = cost_;
			proven_ = cost_ == 0;
			break;
		case Objective::MaximizeStability:
			if (has_best_ && stability_ <= best_stability_)
				return;
			best_stability_ = stability_;
			proven_ = stability_ >= adapt_->upper;
			break;
		}
		has_best_ = true;
		best_ = exec_;
	}

	Schedule build_schedule() const
	{
		Schedule s(H_, M_);
		std::vector<std::vector<std::size_t>> at(H_ + 1);
		for (std::size_t i = 0; i < n_; ++i)
			for (int t : best_[i])
				at[t].push_back(i);
		for (int t = 1; t <= H_; ++t) {
			std::vector<char> taken(M_ + 1, 0);
			std::vector<std::size_t> rest;
			for (auto i : at[t]) {
				int c = adapt_ ? adapt_->preferred_channel[i][t] : 0;
				if (c > 0 && !taken[c]) {
					taken[c] = 1;
					s.place(ts_.id(i), {t, c});
				} else {
					rest.push_back(i);
				}
			}
			int c = 1;
			for (auto i : rest) {
				while (taken[c])
					++c;
				taken[c] = 1;
				s.place(ts_.id(i), {t, c});
			}
		}
		return s;
	}

	const TaskSet& ts_;
	SolveOptions opt_;
	const Adaptation* adapt_;
	std::size_t n_;
	int H_, M_;
	std::vector<int> period_, jitter_, windows_;
	std::vector<std::size_t> order_;
	std::vector<std::vector<std::size_t>> job_members_rev_;
	std::vector<std::vector<std::size_t>> leaf_jobs_;

	std::vector<std::vector<int>> exec_;
	std::vector<std::vector<int>> used_;
	std::vector<int> est_;
	std::vector<std::size_t> here_;
	int current_t_ = 1;
	long long cost_ = 0;
	long long stability_ = 0;

	bool has_best_ = false;
	std::vector<std::vector<int>> best_;
	long long best_cost_ = 0;
	long long best_stability_ = 0;
	bool proven_ = false;
	bool aborted_ = false;
	bool timed_out_ = false;
	std::uint64_t nodes_ = 0;
	Clock::time_point start_;
};

}

SolveOutcome solve(const TaskSet& ts, const SolveOptions& options)
{
	SolveOptions opt = options;
	if (opt.objective == Objective::MaximizeStability)
		opt.objective = Objective::None;
	Search search(ts, opt, nullptr);
	return search.run();
}

MergeResult merge_tasksets(const TaskSet& first, const TaskSet& second)
{
	if (first.channels() != second.channels() && !first.empty() && !second.empty())
		throw MergeError("ChannelCountMismatch: " + std::to_string(first.channels()) + " vs " +
		                 std::to_string(second.channels()) + " channels");
	const auto& a = first.description();
	const auto& b = second.description();

	std::set<TaskId> ids;
	for (const auto& t : a.tasks)
		ids.insert(t.id);
	bool clash = std::any_of(b.tasks.begin(), b.tasks.end(), [&](const auto& t) { return ids.count(t.id) > 0; });
	const TaskId offset = clash ? (ids.empty() ? 0 : *ids.rbegin() + 1) : 0;
	int job_offset = 0;
	for (const auto& j : a.jobs)
		job_offset = std::max(job_offset, j.id + 1);
	std::set<int> job_ids;
	for (const auto& j : a.jobs)
		job_ids.insert(j.id);
	bool job_clash = std::any_of(b.jobs.begin(), b.jobs.end(), [&](const auto& j) { return job_ids.count(j.id) > 0; });
	if (!job_clash)
		job_offset = 0;

	TaskSetDescription d;
	d.channels = first.empty() ? second.channels() : first.channels();
	std::set<NodeId> nodes(a.nodes.begin(), a.nodes.end());
	nodes.insert(b.nodes.begin(), b.nodes.end());
	d.nodes.assign(nodes.begin(), nodes.end());
	d.tasks = a.tasks;
	d.edges = a.edges;
	d.jobs = a.jobs;
	MergeResult r;
	for (auto t : b.tasks) {
		r.second_id_map.emplace_back(t.id, t.id + offset);
		t.id += offset;
		d.tasks.push_back(t);
	}
	std::sort(r.second_id_map.begin(), r.second_id_map.end());
	for (auto e : b.edges) {
		e.from += offset;
		e.to += offset;
		d.edges.push_back(e);
	}
	for (auto j : b.jobs) {
		j.id += job_offset;
		j.leaf += offset;
		for (auto& m : j.members)
			m += offset;
		d.jobs.push_back(j);
	}
	r.taskset = TaskSet::build(std::move(d));
	return r;
}

MergeResult merge_schedules(const Schedule& first_schedule, const Schedule& second_schedule,
                            const TaskSet& first, const TaskSet& second)
{
	if (first_schedule.channels() != second_schedule.channels())
		throw MergeError("ChannelCountMismatch: schedules have " + std::to_string(first_schedule.channels()) +
		                 " and " + std::to_string(second_schedule.channels()) + " channels");
	MergeResult r = merge_tasksets(first, second);
	const int H = r.taskset.hyperperiod();
	const int M = first_schedule.channels();
	std::map<TaskId, TaskId> remap(r.second_id_map.begin(), r.second_id_map.end());

	Schedule second_remapped(second_schedule.hyperperiod(), M);
	for (const auto& p : second_schedule.placements()) {
		auto it = remap.find(p.task);
		second_remapped.place(it == remap.end() ? p.task : it->second, p.slot);
	}
	r.combined = first_schedule.tiled(H);
	for (const auto& p : second_remapped.tiled(H).placements())
		r.combined.place(p.task, p.slot);

	SourceSchedule s1{first_schedule, {}}, s2{second_remapped, {}};
	for (const auto& t : first.description().tasks)
		s1.tasks.push_back(t.id);
	for (const auto& [from, to] : r.second_id_map)
		s2.tasks.push_back(to);
	r.sources = {std::move(s1), std::move(s2)};
	return r;
}

SolveOutcome solve_adaptation(const MergeResult& merge, const SolveOptions& options)
{
	const TaskSet& ts = merge.taskset;
	const int H = ts.hyperperiod();
	const std::size_t n = ts.size();
	if (merge.combined.hyperperiod() != H)
		throw std::invalid_argument("combined schedule does not span the merged hyperperiod");

	Adaptation a;
	a.combined.resize(n);
	a.combined_from.assign(n, std::vector<int>(H + 2, 0));
	a.in_combined.assign(n, std::vector<char>(H + 1, 0));
	a.preferred_channel.assign(n, std::vector<int>(H + 1, 0));
	a.first_lo.assign(n, INT_MIN / 2);
	a.first_hi.assign(n, INT_MAX / 2);
	a.deadline.resize(H + 1);

	for (const auto& p : merge.combined.placements()) {
		auto idx = ts.find(p.task);
		if (!idx)
			continue;
		if (!a.in_combined[*idx][p.slot.time]) {
			a.in_combined[*idx][p.slot.time] = 1;
			a.combined[*idx].push_back(p.slot.time);
			a.preferred_channel[*idx][p.slot.time] = p.slot.channel;
		}
	}
	for (std::size_t i = 0; i < n; ++i) {
		auto& c = a.combined[i];
		std::sort(c.begin(), c.end());
		for (int t = H; t >= 1; --t)
			a.combined_from[i][t] = a.combined_from[i][t + 1] + a.in_combined[i][t];
		const int J = ts.jitter(i);
		for (int s : c) {
			int from = std::max(1, s - J), until = std::min(H, s + J);
			a.deadline[until].emplace_back(i, from);
		}
		// At most one unmoved allocation per own period window.
		const int P = ts.period(i);
		for (int w = 0; w < H / P; ++w)
			a.upper += a.combined_from[i][w * P + 1] - a.combined_from[i][(w + 1) * P + 1] > 0 ? 1 : 0;
	}
	for (const auto& src : merge.sources) {
		for (auto id : src.tasks) {
			auto idx = ts.find(id);
			if (!idx)
				continue;
			auto times = src.schedule.execution_times(id);
			if (times.empty())
				continue;
			const int last = times.back();
			const int base = last + ts.period(*idx) - src.schedule.hyperperiod();
			a.first_lo[*idx] = base - ts.jitter(*idx);
			a.first_hi[*idx] = base + ts.jitter(*idx);
		}
	}

	SolveOptions opt = options;
	opt.objective = Objective::MaximizeStability;
	Search search(ts, opt, &a);
	return search.run();
}

}
