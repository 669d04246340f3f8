#pragma once

#include "babi.hpp"
#include "event_calculus.hpp"
#include "ground.hpp"
#include "http_backend.hpp"
#include "hypothesis_space.hpp"
#include "learner.hpp"
#include "lexicon.hpp"
#include "mode_bias.hpp"
#include "normalize.hpp"
#include "parse.hpp"
#include "parse_backend.hpp"
#include "pipeline.hpp"
#include "program.hpp"
#include "solver.hpp"
#include "synthetic.hpp"
#include "term.hpp"
