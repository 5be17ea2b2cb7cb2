#include <cmath>
#include <vector>

#include "doctest.h"
#include "lnu/error.hpp"
#include "lnu/stats.hpp"

using namespace lnu;

TEST_CASE("mean and sample standard deviation") {
  const std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(mean(xs) == 5.0);
  CHECK(stddev(xs) == doctest::Approx(std::sqrt(32.0 / 7.0)));
  CHECK(stddev(std::vector<double>{3.0}) == 0.0);
  CHECK_THROWS_AS(mean(std::vector<double>{}), Error);
}

TEST_CASE("spearman correlation") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(spearman(x, std::vector<double>{10, 20, 30, 40, 50}) == doctest::Approx(1.0));
  CHECK(spearman(x, std::vector<double>{5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
  // Classic example: rank differences d = (0, -1, 1, 0, 0) give 1 - 6*2/(5*24) = 0.9.
  CHECK(spearman(x, std::vector<double>{1, 3, 2, 4, 5}) == doctest::Approx(0.9));
  // Ties use average ranks: Pearson of (1,2,3,4) against (1.5,1.5,3,4).
  CHECK(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{7, 7, 8, 9}) ==
        doctest::Approx(0.9486832980505138));
  CHECK(std::isnan(spearman(x, std::vector<double>{1, 1, 1, 1, 1})));
  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2}), Error);
}
