#include "doctest.h"
TEST_CASE("placeholder_test_capi") { CHECK(true); }
