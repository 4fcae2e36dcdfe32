#pragma once

#include "lotto/backend.hpp"
#include "lotto/calibration.hpp"
#include "lotto/ensemble.hpp"
#include "lotto/errors.hpp"
#include "lotto/http_backend.hpp"
#include "lotto/lexicon.hpp"
#include "lotto/random.hpp"
#include "lotto/report.hpp"
#include "lotto/scorer.hpp"
#include "lotto/search.hpp"
#include "lotto/synthetic_oracle.hpp"
#include "lotto/task.hpp"
