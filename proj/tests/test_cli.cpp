#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "coho/field.hpp"

TEST_CASE("toolchain smoke") { CHECK(coho::Field::parse("2")->q() == 2); }
