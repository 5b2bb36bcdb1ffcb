#include "doctest.h"
TEST_CASE("placeholder_test_wave") { CHECK(true); }
