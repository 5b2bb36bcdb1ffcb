#include "doctest.h"
TEST_CASE("placeholder_test_cli") { CHECK(true); }
