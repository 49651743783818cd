#include "doctest.h"

#include <random>

#include "oracle.hpp"
#include "support.hpp"
#include "tcsched/metrics.hpp"

using namespace tcs;
using metrics::Rational;
using test::from_times;
using test::make_taskset;

TEST_CASE("jitter examples")
{
	auto one = make_taskset(1, {{0, 0, 1}}, {}, {{0, 5, 0, {0}}, {1, 10, 0, {0}}});
	CHECK(metrics::jitter(from_times(10, 1, {{0, {2, 7}}}), one) == Rational(0));
	CHECK(metrics::jitter(from_times(10, 1, {{0, {2, 8}}}), one) == Rational(1, 2));

	auto two = make_taskset(1, {{0, 0, 1}, {1, 1, 1}}, {}, {{0, 5, 0, {0}}, {1, 5, 1, {1}}, {2, 10, 1, {1}}});
	CHECK(metrics::jitter(from_times(10, 1, {{0, {2, 7}}, {1, {3, 9}}}), two) == Rational(1, 4));
	CHECK(metrics::jitter(Schedule(0, 1), TaskSet::build({})) == Rational(0));
}

TEST_CASE("distribution examples")
{
	CHECK(metrics::distribution(from_times(6, 1, {{0, {1}}, {1, {4}}, {2, {6}}})) == Rational(2, 3));
	CHECK(metrics::distribution(from_times(3, 1, {{0, {1}}, {1, {2}}, {2, {3}}})) == Rational(0));
	CHECK(metrics::distribution(from_times(2, 1, {{0, {1}}})) == Rational(1));
	CHECK(metrics::distribution(Schedule(4, 2)) == Rational(0));
}

TEST_CASE("stability examples")
{
	auto s = from_times(6, 2, {{0, {1}}, {1, {3}}, {2, {5}}});
	CHECK(metrics::stability(s, s) == 3);
	CHECK(metrics::stability(s, from_times(6, 2, {{0, {2}}, {1, {4}}, {2, {6}}})) == 0);
	auto moved = from_times(6, 2, {{0, {1}}, {1, {4}}, {2, {5}}});
	CHECK(metrics::stability(s, moved) == 2);
	CHECK(metrics::stability(moved, s) == 2);
	// channel changes are ignored
	Schedule other(6, 2);
	other.place(0, {1, 2});
	CHECK(metrics::stability(s, other) == 1);
	CHECK_THROWS(metrics::stability(s, Schedule(3, 2)));
}

TEST_CASE("slot histogram examples")
{
	auto a = from_times(4, 1, {{0, {1}}, {1, {3}}});
	auto b = from_times(4, 1, {{0, {1}}});
	std::vector<Schedule> single{a};
	auto h1 = metrics::slot_histogram(single);
	CHECK(h1.probability == std::vector<double>{1, 0, 1, 0});
	std::vector<Schedule> pair{a, b};
	auto h2 = metrics::slot_histogram(pair);
	CHECK(h2.probability[2] == doctest::Approx(0.5));
	CHECK(h2.probability[0] == doctest::Approx(1));
	CHECK(h2.reference == doctest::Approx((0.5 + 0.25) / 2));
	CHECK_THROWS(metrics::slot_histogram(std::vector<Schedule>{}));
}

TEST_CASE("metric invariants on valid schedules")
{
	std::mt19937_64 rng(13);
	std::vector<Schedule> valid;
	for (int round = 0; round < 80; ++round) {
		auto ts = test::random_small(rng, 4, 8, 2);
		auto o = test::enumerate(ts);
		if (!o.feasible)
			continue;
		const auto& s = *o.witness;
		valid.push_back(s);
		auto j = metrics::jitter(s, ts);
		auto d = metrics::distribution(s);
		CHECK(j >= Rational(0));
		CHECK(d >= Rational(0));
		CHECK(d <= Rational(1));
		CHECK(metrics::stability(s, s) == static_cast<long long>(s.execution_count()));
		// exactly periodic copy has zero jitter
		bool periodic = true;
		for (std::size_t i = 0; i < ts.size(); ++i) {
			auto e = s.execution_times(ts.id(i));
			for (std::size_t k = 1; k < e.size(); ++k)
				periodic = periodic && e[k] - e[k - 1] == ts.period(i);
		}
		if (periodic)
			CHECK(j == Rational(0));
	}
	// the pair distribution is the sum of both parts
	for (std::size_t k = 0; k + 1 < valid.size(); k += 2) {
		auto sum = metrics::distribution(valid[k]) + metrics::distribution(valid[k + 1]);
		CHECK(sum >= Rational(0));
		CHECK(sum <= Rational(2));
	}
}
