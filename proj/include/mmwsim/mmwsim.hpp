#pragma once

// Convenience umbrella for the whole library.

#include "mmwsim/antenna.hpp"
#include "mmwsim/channel.hpp"
#include "mmwsim/controller.hpp"
#include "mmwsim/db.hpp"
#include "mmwsim/engine.hpp"
#include "mmwsim/errors.hpp"
#include "mmwsim/linkbudget.hpp"
#include "mmwsim/mobility.hpp"
#include "mmwsim/pathloss.hpp"
#include "mmwsim/report.hpp"
#include "mmwsim/rng.hpp"
#include "mmwsim/scenario.hpp"
#include "mmwsim/topology.hpp"
