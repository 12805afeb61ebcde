#pragma once

#include <efpast/algebra.hpp>
#include <efpast/automaton.hpp>
#include <efpast/compile.hpp>
#include <efpast/decision.hpp>
#include <efpast/errors.hpp>
#include <efpast/formula.hpp>
#include <efpast/game.hpp>
#include <efpast/oracle.hpp>
#include <efpast/semantics.hpp>
#include <efpast/terms.hpp>
