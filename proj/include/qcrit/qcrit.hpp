#pragma once

#include "qcrit/criticality.hpp"
#include "qcrit/ed.hpp"
#include "qcrit/error.hpp"
#include "qcrit/free_fermion.hpp"
#include "qcrit/lmg.hpp"
#include "qcrit/model.hpp"
#include "qcrit/sweep.hpp"
#include "qcrit/validate.hpp"
#include "qcrit/xstate.hpp"
#include "qcrit/xxz.hpp"
