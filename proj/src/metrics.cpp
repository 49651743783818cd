#include "tcsched/metrics.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

#include "tcsched/validator.hpp"

namespace tcs::metrics {

double to_double(const Rational& r)
{
	return boost::rational_cast<double>(r);
}

std::string to_string(const Rational& r)
{
	if (r.denominator() == 1)
		return std::to_string(r.numerator());
	return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational jitter(const Schedule& schedule, const TaskSet& ts)
{
	if (ts.empty())
		return 0;
	const auto times = check::execution_times(schedule, ts);
	Rational total = 0;
	for (std::size_t i = 0; i < ts.size(); ++i) {
		const auto& e = times[i];
		if (e.empty())
			continue;
		const int P = ts.period(i);
		std::int64_t sum = 0;
		for (int t : e)
			sum += (t - e.front()) % P;
		total += Rational(sum, static_cast<std::int64_t>(e.size()));
	}
	return total / static_cast<std::int64_t>(ts.size());
}

Rational distribution(const Schedule& schedule)
{
	if (schedule.execution_count() == 0)
		return 0;
	std::int64_t transitions = 0;
	bool previous_used = false;
	for (int t = 1; t <= schedule.hyperperiod(); ++t) {
		bool used = schedule.time_slot_used(t);
		if (previous_used && !used)
			++transitions;
		previous_used = used;
	}
	return Rational(transitions, static_cast<std::int64_t>(schedule.execution_count()));
}

long long stability(const Schedule& before, const Schedule& after)
{
	if (before.hyperperiod() != after.hyperperiod())
		throw ValidationError(ValidationErrorKind::DimensionMismatch, "stability needs equal hyperperiods");
	long long unmoved = 0;
	for (int t = 1; t <= before.hyperperiod(); ++t) {
		auto a = before.tasks_at(t);
		auto b = after.tasks_at(t);
		std::sort(a.begin(), a.end());
		a.erase(std::unique(a.begin(), a.end()), a.end());
		std::sort(b.begin(), b.end());
		b.erase(std::unique(b.begin(), b.end()), b.end());
		std::vector<TaskId> common;
		std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
		unmoved += static_cast<long long>(common.size());
	}
	return unmoved;
}

SlotHistogram slot_histogram(std::span<const Schedule> corpus)
{
	if (corpus.empty())
		throw std::invalid_argument("slot histogram of an empty corpus");
	const int H = corpus.front().hyperperiod();
	SlotHistogram h;
	h.probability.assign(H, 0.0);
	double used_fraction = 0;
	for (const auto& s : corpus) {
		if (s.hyperperiod() != H)
			throw ValidationError(ValidationErrorKind::DimensionMismatch, "slot histogram needs a common hyperperiod");
		int used = 0;
		for (int t = 1; t <= H; ++t)
			if (s.time_slot_used(t)) {
				h.probability[t - 1] += 1;
				++used;
			}
		used_fraction += H ? static_cast<double>(used) / H : 0;
	}
	for (auto& p : h.probability)
		p /= static_cast<double>(corpus.size());
	h.reference = used_fraction / static_cast<double>(corpus.size());
	return h;
}

}
