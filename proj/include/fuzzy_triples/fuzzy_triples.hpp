#pragma once

#include "clifford.hpp"
#include "fuzzy.hpp"
#include "json_io.hpp"
#include "linalg.hpp"
#include "montecarlo.hpp"
#include "sphere.hpp"
#include "triple.hpp"
