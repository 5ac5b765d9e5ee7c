#pragma once

// Umbrella header pulling in the whole engine.

#include "rational.hpp"
#include "diag.hpp"
#include "term.hpp"
#include "system.hpp"
#include "closure.hpp"
#include "sysops.hpp"
#include "morphism.hpp"
#include "search.hpp"
#include "dynamics.hpp"
#include "blend.hpp"
#include "emergence.hpp"
#include "dsl.hpp"
#include "json_out.hpp"
