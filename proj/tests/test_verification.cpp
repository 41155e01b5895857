#include <doctest.h>
TEST_CASE("placeholder_verification") { CHECK(true); }
