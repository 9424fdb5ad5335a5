#pragma once

// Umbrella header. http_transport.hpp is not included; it needs httplib.

#include "ctxdep/annotation.hpp"
#include "ctxdep/app.hpp"
#include "ctxdep/assessment.hpp"
#include "ctxdep/conllu.hpp"
#include "ctxdep/detectors.hpp"
#include "ctxdep/errors.hpp"
#include "ctxdep/eval.hpp"
#include "ctxdep/korp.hpp"
#include "ctxdep/lexicons.hpp"
#include "ctxdep/profile.hpp"
#include "ctxdep/rational.hpp"
#include "ctxdep/theme.hpp"
#include "ctxdep/utf8.hpp"
