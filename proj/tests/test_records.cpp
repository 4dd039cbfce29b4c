#include <sstream>

#include "doctest.h"
#include "exactwkb/common.hpp"
#include "exactwkb/records.hpp"

using namespace exactwkb;

TEST_CASE("round trip") {
  RecordTable t;
  t.columns = {"q", "re_psi", "converged"};
  t.notes = {"potential: q^4 - 5 q^2"};
  t.add({-1.5, 0.1 + 0.2, 1.0});
  t.add({1.0 / 3.0, -1.2345678901234567e-300, 0.0});
  t.add({2.0, std::nan(""), 0.0});
  std::stringstream ss;
  write_records(ss, t);
  const auto back = read_records(ss);
  CHECK(back.columns == t.columns);
  CHECK(back.notes == t.notes);
  REQUIRE(back.rows.size() == 3);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c) CHECK(back.rows[r][c] == t.rows[r][c]);
  CHECK(std::isnan(back.rows[2][1]));
  CHECK(back.column("converged") == 2);
  CHECK_THROWS_AS(back.column("nope"), Error);
}

TEST_CASE("malformed input") {
  std::stringstream ragged("# a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_records(ragged), Error);
  std::stringstream headless("1,2\n");
  CHECK_THROWS_AS(read_records(headless), Error);
  std::stringstream junk("# a\nx1\n");
  CHECK_THROWS_AS(read_records(junk), Error);
  RecordTable t;
  t.columns = {"a"};
  CHECK_THROWS_AS(t.add({1.0, 2.0}), Error);
}
