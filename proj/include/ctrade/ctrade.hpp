#pragma once

#include "ctrade/alpha_table.hpp"
#include "ctrade/bisection.hpp"
#include "ctrade/dataset.hpp"
#include "ctrade/estimation.hpp"
#include "ctrade/model.hpp"
#include "ctrade/normal.hpp"
#include "ctrade/ols.hpp"
#include "ctrade/plot.hpp"
#include "ctrade/predict.hpp"
#include "ctrade/report.hpp"
#include "ctrade/synth.hpp"
#include "ctrade/trade_data.hpp"
#include "ctrade/types.hpp"
