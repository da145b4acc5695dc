#include "doctest.h"

#include "corpus.hpp"
#include "sweep.hpp"

// A lighter run than the acceptance gate; the seed comes from RELALG_SEED.
TEST_CASE("differential sweep") {
    for (const auto& r : sweep::all(200, corpus::seed())) {
        INFO(r.name << ": " << r.first);
        CHECK(r.disagreements == 0);
    }
}
