#pragma once

#include "tqkd/model.hpp"
#include "tqkd/infotheory.hpp"
#include "tqkd/distill.hpp"
#include "tqkd/simulator.hpp"
#include "tqkd/report.hpp"
#include "tqkd/commands.hpp"
