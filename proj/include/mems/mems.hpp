#pragma once

#include "mems/asymptotics.hpp"
#include "mems/bounds.hpp"
#include "mems/continuation.hpp"
#include "mems/domain.hpp"
#include "mems/eigenpair.hpp"
#include "mems/error.hpp"
#include "mems/io.hpp"
#include "mems/radial.hpp"
#include "mems/shooting.hpp"
#include "mems/special.hpp"
