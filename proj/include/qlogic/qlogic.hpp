#pragma once

// Umbrella header for the QLogic library: a three-valued modal fixed-point
// logic over semitopologies, with Declarative Paxos as an executable theory.

#include "qlogic/truth.hpp"
#include "qlogic/semitopology.hpp"
#include "qlogic/syntax.hpp"
#include "qlogic/printer.hpp"
#include "qlogic/parser.hpp"
#include "qlogic/semantics.hpp"
#include "qlogic/theory.hpp"
#include "qlogic/paxos.hpp"
#include "qlogic/io.hpp"
