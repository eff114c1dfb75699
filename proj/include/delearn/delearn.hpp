#pragma once

#include "delearn/action_model.hpp"
#include "delearn/errors.hpp"
#include "delearn/io.hpp"
#include "delearn/learners.hpp"
#include "delearn/library.hpp"
#include "delearn/logic.hpp"
#include "delearn/scenarios.hpp"
#include "delearn/stream.hpp"
