#include <doctest.h>

#include "properties.hpp"

TEST_CASE("negativity is invariant under local symplectics") { CHECK(props::negativity_invariance(100) == 0); }
TEST_CASE("fidelity is symmetric with unit self-fidelity") { CHECK(props::fidelity_symmetry(100) == 0); }
TEST_CASE("hafnian agrees with the recursive expansion") { CHECK(props::hafnian_oracle(50) == 0); }
TEST_CASE("homodyne conditioning keeps pure states pure") { CHECK(props::conditioned_purity(100) == 0); }
TEST_CASE("disentanglement coefficients reproduce the exponential") { CHECK(props::disentangle_oracle(100) == 0); }
