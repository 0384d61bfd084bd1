#pragma once

#include "fiid/error.hpp"
#include "fiid/numeric.hpp"
#include "fiid/graph.hpp"
#include "fiid/ball.hpp"
#include "fiid/rule.hpp"
#include "fiid/edge_ball.hpp"
#include "fiid/entropy.hpp"
#include "fiid/homsearch.hpp"
#include "fiid/simulate.hpp"
#include "fiid/report_json.hpp"
