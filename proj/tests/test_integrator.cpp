#include <doctest.h>
TEST_CASE("placeholder_integrator") { CHECK(true); }
