#include <contextuality/closed_forms.hpp>
#include <contextuality/fourier_motzkin.hpp>
#include <contextuality/oracle.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

using namespace contextuality;

namespace {

LinearSystem xyz() { return LinearSystem({"x", "y", "z"}); }

std::vector<Rational> point2(long y, long z, long den = 1) {
  return {Rational(y, den), Rational(z, den)};
}

}  // namespace

TEST_CASE("pairing lower and upper bounds", "[fm]") {
  LinearSystem sys = xyz();
  sys.add_inequality({Integer(-1), Integer(1), Integer(0)}, Integer(0));  // x >= y
  sys.add_inequality({Integer(1), Integer(0), Integer(-1)}, Integer(0));  // x <= z
  LinearSystem out = fourier_motzkin_eliminate(sys, "x");
  CHECK(out.coordinates() == std::vector<std::string>{"y", "z"});
  CHECK(out.serialize() == "1*y + -1*z <= 0\n");
}

TEST_CASE("infeasible combination is retained as a constant row", "[fm]") {
  LinearSystem sys = xyz();
  sys.add_inequality({Integer(-1), Integer(0), Integer(0)}, Integer(0));  // x >= 0
  sys.add_inequality({Integer(1), Integer(0), Integer(0)}, Integer(-1));  // x <= -1
  LinearSystem out = fourier_motzkin_eliminate(sys, "x");
  CHECK(out.serialize() == "0 <= -1\n");
}

TEST_CASE("absent coordinate projects to itself", "[fm]") {
  LinearSystem sys({"y", "z"});
  sys.add_inequality({Integer(1), Integer(2)}, Integer(3));
  LinearSystem out = fourier_motzkin_eliminate(sys, "x");
  CHECK(out.serialize() == sys.serialize());
}

TEST_CASE("equalities involving the coordinate split into bounds", "[fm]") {
  LinearSystem sys = xyz();
  sys.add_equality({Integer(1), Integer(-1), Integer(0)}, Integer(0));  // x = y
  sys.add_inequality({Integer(1), Integer(0), Integer(0)}, Integer(3)); // x <= 3
  LinearSystem out = fourier_motzkin_eliminate(sys, "x");
  CHECK(out.serialize() == "1*y <= 3\n");
}

TEST_CASE("projection is sound and complete on random systems", "[fm]") {
  std::mt19937_64 eng(31);
  for (int trial = 0; trial < 150; ++trial) {
    LinearSystem sys = xyz();
    const std::size_t rows = 2 + eng() % 6;
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<Integer> coeffs(3);
      for (auto& c : coeffs) c = Integer(long(eng() % 7) - 3);
      sys.add_inequality(std::move(coeffs), Integer(long(eng() % 9) - 2));
    }
    LinearSystem projected = fourier_motzkin_eliminate(sys, "x");

    for (int p = 0; p < 20; ++p) {
      std::vector<Rational> yz_point = point2(long(eng() % 9) - 4, long(eng() % 9) - 4, 2);
      // Direct 1-D extension check against the input rows.
      bool possible = true;
      bool has_lo = false, has_hi = false;
      Rational lo, hi;
      for (const LinearRow& row : sys.rows()) {
        const Rational a(row.coeffs[0]);
        Rational rest = Rational(row.coeffs[1]) * yz_point[0] +
                        Rational(row.coeffs[2]) * yz_point[1];
        if (a == 0) {
          if (rest > Rational(row.rhs)) possible = false;
        } else if (a > 0) {  // x <= (rhs - rest)/a
          Rational bound = (Rational(row.rhs) - rest) / a;
          if (!has_hi || bound < hi) hi = bound;
          has_hi = true;
        } else {
          Rational bound = (Rational(row.rhs) - rest) / a;
          if (!has_lo || bound > lo) lo = bound;
          has_lo = true;
        }
      }
      if (possible && has_lo && has_hi && lo > hi) possible = false;
      CHECK(projected.satisfies(yz_point) == possible);
    }
  }
}

TEST_CASE("redundancy removal", "[fm]") {
  LinearSystem sys({"x"});
  sys.add_inequality({Integer(1)}, Integer(1));
  sys.add_inequality({Integer(1)}, Integer(2));
  LinearSystem out = remove_redundant(sys);
  CHECK(out.serialize() == "1*x <= 1\n");

  LinearSystem both({"x", "y"});
  both.add_inequality({Integer(1), Integer(0)}, Integer(1));
  both.add_inequality({Integer(0), Integer(1)}, Integer(1));
  CHECK(remove_redundant(both).size() == 2);

  // A single halfspace: the surviving maximization is unbounded, keep it.
  LinearSystem one({"x", "y"});
  one.add_inequality({Integer(1), Integer(1)}, Integer(1));
  CHECK(remove_redundant(one).size() == 1);
}

TEST_CASE("redundancy removal on infeasible systems", "[fm]") {
  LinearSystem sys({"x"});
  sys.add_inequality({Integer(1)}, Integer(1));
  sys.add_inequality({Integer(0)}, Integer(-1));  // 0 <= -1
  LinearSystem out = remove_redundant(sys);
  CHECK(out.serialize() == "0 <= -1\n");

  LinearSystem clash({"x"});
  clash.add_inequality({Integer(1)}, Integer(0));    // x <= 0
  clash.add_inequality({Integer(-1)}, Integer(-1));  // x >= 1
  LinearSystem out2 = remove_redundant(clash);
  CHECK(out2.size() == 2);  // each side needed, the conflict survives
}

TEST_CASE("redundancy removal never changes the feasible set", "[fm]") {
  std::mt19937_64 eng(47);
  for (int trial = 0; trial < 60; ++trial) {
    LinearSystem sys({"x", "y", "z"});
    const std::size_t rows = 3 + eng() % 8;
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<Integer> coeffs(3);
      for (auto& c : coeffs) c = Integer(long(eng() % 7) - 3);
      sys.add_inequality(std::move(coeffs), Integer(long(eng() % 7)));
    }
    LinearSystem pruned = remove_redundant(sys);
    CHECK(pruned.size() <= sys.size());
    for (int p = 0; p < 40; ++p) {
      std::vector<Rational> pt = {Rational(long(eng() % 13) - 6, 3),
                                  Rational(long(eng() % 13) - 6, 3),
                                  Rational(long(eng() % 13) - 6, 3)};
      LinearSystem canonical = sys;
      canonical.canonicalize();
      CHECK(canonical.satisfies(pt) == pruned.satisfies(pt));
    }
  }
}

TEST_CASE("cyclic-3 cost projection matches the closed form and golden file", "[fm]") {
  const SystemDescriptor lg = SystemDescriptor::lg();
  LinearSystem derived = derive_delta_system(lg);
  CHECK(derived.size() == 36);
  CHECK(derived == delta_system_closed_form(lg));

  std::ifstream golden(std::string(CTX_DATA_DIR) + "/golden/lg_delta.txt");
  REQUIRE(golden.good());
  std::ostringstream buf;
  buf << golden.rdbuf();
  CHECK(derived.serialize() == buf.str());

  // The derived tightest bounds agree with the report bounds on samples.
  const std::size_t delta = derived.coordinate_index("delta");
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    LGObservables o = random_lg(seed);
    LGReport r = delta_min_lg(o);
    std::vector<Rational> point = {o.xy,  o.xz,  o.yz,  o.x12, o.x13,
                                   o.y12, o.y23, o.z13, o.z23, Rational(0)};
    point[delta] = r.delta_min;
    CHECK(derived.satisfies(point));
    point[delta] = r.delta_upper;
    CHECK(derived.satisfies(point));
    if (r.delta_min > 0) {
      point[delta] = r.delta_min - Rational(1, 1000000);
      CHECK_FALSE(derived.satisfies(point));
    }
    point[delta] = r.delta_upper + Rational(1, 1000000);
    CHECK_FALSE(derived.satisfies(point));
  }
}

TEST_CASE("feasibility and maximization helpers", "[fm]") {
  LinearSystem box({"x", "y"});
  box.add_inequality({Integer(1), Integer(0)}, Integer(1));
  box.add_inequality({Integer(-1), Integer(0)}, Integer(1));
  box.add_inequality({Integer(0), Integer(1)}, Integer(1));
  box.add_inequality({Integer(0), Integer(-1)}, Integer(1));
  CHECK(system_feasible(box));
  MaximizeResult m = maximize_over(box, {Rational(1), Rational(1)});
  REQUIRE(m.status == LpStatus::Optimal);
  CHECK(m.value == 2);

  LinearSystem empty({"x"});
  empty.add_inequality({Integer(1)}, Integer(0));
  empty.add_inequality({Integer(-1)}, Integer(-1));
  CHECK_FALSE(system_feasible(empty));
}
