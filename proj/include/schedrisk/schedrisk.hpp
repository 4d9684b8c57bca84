#pragma once

#include "schedrisk/engine.hpp"
#include "schedrisk/expected.hpp"
#include "schedrisk/model.hpp"
#include "schedrisk/process_io.hpp"
#include "schedrisk/random.hpp"
#include "schedrisk/report.hpp"
#include "schedrisk/scenario.hpp"
#include "schedrisk/stats.hpp"
