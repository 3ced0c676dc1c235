#ifndef NGSL_NGSL_HPP
#define NGSL_NGSL_HPP

#include "ngsl/demon.hpp"
#include "ngsl/error.hpp"
#include "ngsl/evolution.hpp"
#include "ngsl/ledger.hpp"
#include "ngsl/schwarzschild.hpp"
#include "ngsl/screen.hpp"
#include "ngsl/shell.hpp"
#include "ngsl/units.hpp"

#endif  // NGSL_NGSL_HPP
