#pragma once

#include "apdep/rational.hpp"
#include "apdep/team.hpp"
#include "apdep/satisfaction.hpp"
#include "apdep/atom.hpp"
#include "apdep/calculus.hpp"
#include "apdep/completeness.hpp"
#include "apdep/discovery.hpp"
#include "apdep/io.hpp"
