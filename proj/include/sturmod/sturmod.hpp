// Umbrella header for the library modules (the CLI layer lives in cli.hpp).
#pragma once

#include "sturmod/exact.hpp"
#include "sturmod/orbits.hpp"
#include "sturmod/series.hpp"
#include "sturmod/sturmian.hpp"
#include "sturmod/verify.hpp"
#include "sturmod/words.hpp"
#include "sturmod/wordspec.hpp"
