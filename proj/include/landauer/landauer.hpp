#pragma once

#include "cavity_field.hpp"
#include "dephasing_interaction.hpp"
#include "dissipative_interaction.hpp"
#include "entropy_landauer.hpp"
#include "errors.hpp"
#include "fock_oracle.hpp"
#include "qubit_state.hpp"
#include "scenario.hpp"
#include "thermal_env.hpp"
#include "version.hpp"
