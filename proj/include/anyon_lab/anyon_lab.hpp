#pragma once

#include "anyon_lab/types.hpp"
#include "anyon_lab/linalg.hpp"
#include "anyon_lab/fock.hpp"
#include "anyon_lab/model.hpp"
#include "anyon_lab/entanglement.hpp"
#include "anyon_lab/dynamics.hpp"
#include "anyon_lab/thermal.hpp"
#include "anyon_lab/parallel.hpp"
#include "anyon_lab/dataset.hpp"
#include "anyon_lab/verify.hpp"
#include "anyon_lab/runner.hpp"
