#pragma once

#include "maxel/cone.hpp"
#include "maxel/descent.hpp"
#include "maxel/error.hpp"
#include "maxel/experiment.hpp"
#include "maxel/fixtures.hpp"
#include "maxel/ground_set.hpp"
#include "maxel/plastria.hpp"
#include "maxel/point.hpp"
#include "maxel/properties.hpp"
#include "maxel/relation.hpp"
#include "maxel/trace_io.hpp"
#include "maxel/vip.hpp"
