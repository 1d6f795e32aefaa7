// Decompose a random element both ways and show that the pieces multiply back.

#include <cstdio>

#include "hyperlie/iwasawa.hpp"
#include "hyperlie/random.hpp"

int main() {
  using namespace hyperlie;
  Rng rng = make_stream(7, "tour");
  const GroupElement g = random_group_element(rng, 2, 0.8);
  for (Sign s : {Sign::plus, Sign::minus}) {
    const IwasawaFactors f = iwasawa_decompose(g, s);
    std::printf("sign %s: t = %+.6f  v = (%+.6f, %+.6f)  |k a n - g| / |g| = %.2e\n", to_string(s), f.t,
                f.v(0), f.v(1), f.residual);
  }
}
