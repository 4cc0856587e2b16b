#pragma once

#include <phonon_chain/chain_model.hpp>
#include <phonon_chain/classical_state.hpp>
#include <phonon_chain/error.hpp>
#include <phonon_chain/fock_oracle.hpp>
#include <phonon_chain/gibbs_thermo.hpp>
#include <phonon_chain/length_observable.hpp>
#include <phonon_chain/measurement_model.hpp>
