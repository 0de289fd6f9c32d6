#pragma once

#include "gbsrf/error.hpp"
#include "gbsrf/words.hpp"
#include "gbsrf/syntax.hpp"
#include "gbsrf/presentation.hpp"
#include "gbsrf/gamma.hpp"
#include "gbsrf/britton.hpp"
#include "gbsrf/certify.hpp"
#include "gbsrf/complexes.hpp"
#include "gbsrf/serialize.hpp"
