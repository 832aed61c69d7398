#pragma once

#include "exforge/errors.hpp"
#include "exforge/numtheory.hpp"
#include "exforge/graph.hpp"
#include "exforge/spectrum.hpp"
#include "exforge/constructions.hpp"
#include "exforge/pipeline.hpp"
