#pragma once

#include "qmi/classical_group.hpp"
#include "qmi/error.hpp"
#include "qmi/isometry_check.hpp"
#include "qmi/m2cc.hpp"
#include "qmi/magic_unitary.hpp"
#include "qmi/matrix_core.hpp"
#include "qmi/metric_space.hpp"
#include "qmi/transport.hpp"
