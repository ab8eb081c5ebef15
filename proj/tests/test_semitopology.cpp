#include <catch_amalgamated.hpp>

#include <random>

#include "qlogic/io.hpp"
#include "qlogic/semitopology.hpp"

using namespace qlogic;

namespace {

// Brute-force oracles, independent of the Semitopology member functions.
bool oracle_dense(const Semitopology& st, PointSet p) {
  for (PointSet o : st.opens())
    if (o != 0 && (o & p) == 0) return false;
  return true;
}

bool oracle_noi(const Semitopology& st, PointSet p) {
  for (PointSet o : st.opens())
    if (o != 0 && (o | p) == p) return true;
  return false;
}

// n-twined by enumerating n-tuples with repetition, literally.
bool oracle_n_twined(const Semitopology& st, int n) {
  if (n == 0) return st.point_count() > 0;
  auto ne = st.nonempty_opens();
  if (ne.empty()) return true;
  std::vector<int> pick(n, 0);
  while (true) {
    PointSet inter = st.points();
    for (int i : pick) inter &= ne[i];
    if (inter == 0) return false;
    int i = n - 1;
    while (i >= 0 && pick[i] == static_cast<int>(ne.size()) - 1) --i;
    if (i < 0) return true;
    ++pick[i];
    for (int j = i + 1; j < n; ++j) pick[j] = 0;
  }
}

Semitopology random_semitopology(std::mt19937& rng, int max_points) {
  int n = 1 + static_cast<int>(rng() % max_points);
  PointSet full = full_set(n);
  std::vector<PointSet> opens{0u, full};
  int extra = static_cast<int>(rng() % 4);
  for (int i = 0; i < extra; ++i) opens.push_back(static_cast<PointSet>(rng()) & full);
  // close under unions
  bool grew = true;
  while (grew) {
    grew = false;
    size_t sz = opens.size();
    for (size_t i = 0; i < sz; ++i)
      for (size_t j = i + 1; j < sz; ++j) {
        PointSet u = opens[i] | opens[j];
        if (std::find(opens.begin(), opens.end(), u) == opens.end()) {
          opens.push_back(u);
          grew = true;
        }
      }
  }
  return Semitopology::validate(n, opens);
}

}  // namespace

TEST_CASE("validate accepts and rejects per the invariants") {
  CHECK_NOTHROW(Semitopology::validate(2, {0b00, 0b01, 0b11}));
  CHECK_THROWS_MATCHES(Semitopology::validate(2, {0b01, 0b10, 0b11}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::MissingEmptySet;
                       }));
  CHECK_THROWS_MATCHES(Semitopology::validate(2, {0b00, 0b01, 0b10}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::NotUnionClosed;
                       }));
  CHECK_THROWS_MATCHES(Semitopology::validate(3, {0b000, 0b001}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::MissingFullSet;
                       }));
}

TEST_CASE("all_but families") {
  Semitopology ab41 = Semitopology::all_but(4, 1);
  CHECK(ab41.opens().size() == 6);  // empty, four 3-subsets, full
  Semitopology ab30 = Semitopology::all_but(3, 0);
  CHECK(ab30.opens() == std::vector<PointSet>{0b000, 0b111});
  Semitopology ab22 = Semitopology::all_but(2, 2);
  CHECK(ab22.opens().size() == 4);  // full powerset of two points
  CHECK_THROWS_MATCHES(Semitopology::all_but(2, 3), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::InvalidParams;
                       }));
  for (int n = 0; n <= 8; ++n)
    for (int f = 0; f <= n; ++f) CHECK_NOTHROW(Semitopology::all_but(n, f));
}

TEST_CASE("dense and noi on all_but(4,1)") {
  Semitopology st = Semitopology::all_but(4, 1);
  CHECK(st.dense(0b0011));
  CHECK_FALSE(st.dense(0b0001));
  CHECK(st.noi(0b0111));
  CHECK_FALSE(st.noi(0b0011));
  Semitopology empty = Semitopology::validate(0, {0u});
  CHECK(empty.dense(0u));  // no nonempty opens: vacuous
}

TEST_CASE("nonempty_opens canonical order") {
  Semitopology ab21 = Semitopology::all_but(2, 1);
  CHECK(ab21.nonempty_opens() == std::vector<PointSet>{0b01, 0b10, 0b11});
  CHECK(Semitopology::all_but(3, 0).nonempty_opens() == std::vector<PointSet>{0b111});
  CHECK(Semitopology::validate(0, {0u}).nonempty_opens().empty());
  // cardinality then lexicographic: {0,3} before {1,2}
  Semitopology st = Semitopology::validate(
      4, {0u, 0b1001, 0b0110, 0b1111});
  CHECK(st.nonempty_opens() == std::vector<PointSet>{0b1001, 0b0110, 0b1111});
}

TEST_CASE("n-twined basics") {
  CHECK(Semitopology::all_but(3, 1).is_n_twined(2));
  CHECK_FALSE(Semitopology::all_but(3, 1).is_n_twined(3));
  for (int n = 1; n <= 6; ++n)
    for (int f = 0; f <= n; ++f) CHECK(Semitopology::all_but(n, f).is_n_twined(1));
  CHECK(Semitopology::all_but(3, 1).is_n_twined(0));
  CHECK_FALSE(Semitopology::validate(0, {0u}).is_n_twined(0));
  CHECK(Semitopology::validate(0, {0u}).is_n_twined(1));
}

TEST_CASE("allbut cardinality laws, exhaustive over the nondegenerate range") {
  // The textbook counting laws (noi iff |P| >= N-f, dense iff |P| >= f+1,
  // n-twined iff N > n*f) fail in the degenerate corners N = 0 and f = N,
  // where the smallest nonempty open has size max(1, N-f), not N-f. The
  // corner-corrected characterisation is exhaustively true; the acceptance
  // suite keeps the literal criterion and reports the corners.
  for (int n = 0; n <= 6; ++n)
    for (int f = 0; f <= n; ++f) {
      Semitopology st = Semitopology::all_but(n, f);
      int min_open = std::max(1, n - f);
      for (PointSet p = 0; p <= full_set(n) && n > 0; ++p) {
        CHECK(st.noi(p) == (set_size(p) >= min_open));
        CHECK(st.dense(p) == (set_size(p) >= n - min_open + 1));
        if (f < n) {
          CHECK(st.noi(p) == (set_size(p) >= n - f));
          CHECK(st.dense(p) == (set_size(p) >= f + 1));
        }
      }
      for (int tw = 1; tw <= 3; ++tw) {
        if (n > 0 && f < n) CHECK(st.is_n_twined(tw) == (n > tw * f));
        // corner-corrected form: opens miss at most min(N-1, f) points each
        bool corrected = n == 0 || n > tw * std::min(n - 1, f);
        CHECK(st.is_n_twined(tw) == corrected);
      }
    }
}

TEST_CASE("dense and noi are up-closed and de Morgan dual") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    Semitopology st = random_semitopology(rng, 5);
    PointSet full = st.points();
    for (PointSet p = 0; p <= full && full != 0; ++p) {
      CHECK(st.dense(p) == oracle_dense(st, p));
      CHECK(st.noi(p) == oracle_noi(st, p));
      CHECK(st.dense(p) == !st.noi(full & ~p));
      CHECK(st.noi(p) == !st.dense(full & ~p));
      if (st.dense(p))
        for (PointSet q = p; q <= full; q = (q + 1) | p) {
          CHECK(st.dense(q));
          if (q == full) break;
        }
    }
  }
}

TEST_CASE("n-twined agrees with tuple enumeration on random semitopologies") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    Semitopology st = random_semitopology(rng, 4);
    for (int n = 0; n <= 3; ++n) CHECK(st.is_n_twined(n) == oracle_n_twined(st, n));
  }
}

TEST_CASE("partition of a 2-twined space contains a dense element") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 80; ++trial) {
    Semitopology st = random_semitopology(rng, 5);
    PointSet full = st.points();
    if (full == 0) continue;
    if (st.is_n_twined(2)) {
      for (PointSet a = 0; a <= full; ++a) {
        PointSet b = full & ~a;
        CHECK((st.dense(a) || st.dense(b)));
        if (a == full) break;
      }
    }
    if (st.is_n_twined(3) && st.point_count() <= 4) {
      for (PointSet a = 0; a <= full; ++a) {
        for (PointSet b = 0; b <= full; ++b) {
          if ((a & b) != 0) continue;
          PointSet c = full & ~(a | b);
          CHECK((st.dense(a) || st.dense(b) || st.dense(c)));
        }
        if (a == full) break;
      }
    }
  }
}

TEST_CASE("semitopology JSON forms round-trip") {
  Semitopology st = Semitopology::all_but(3, 1);
  Json j = semitopology_to_json(st);
  CHECK(semitopology_from_json(j) == st);
  Json ab = {{"all_but", {{"n", 3}, {"f", 1}}}};
  CHECK(semitopology_from_json(ab) == st);
}
