/* AbsoluteValue reaching DWork through a pointer. */

typedef unsigned char uint8_T;
typedef int int32_T;
typedef double real_T;

#define AbsoluteValue_IN_N 2
#define AbsoluteValue_IN_P 1

typedef struct {
  uint8_T is_active_c1_AbsoluteValue;
  uint8_T is_c1_AbsoluteValue;
} D_Work_AbsoluteValue;

typedef struct {
  int32_T y;
} BlockIO_AbsoluteValue;

typedef struct {
  int32_T u;
} ExternalInputs_AbsoluteValue;

typedef struct {
  int32_T y;
} ExternalOutputs_AbsoluteValue;

D_Work_AbsoluteValue AbsoluteValue_DWork;
BlockIO_AbsoluteValue AbsoluteValue_B;
ExternalInputs_AbsoluteValue AbsoluteValue_U;
ExternalOutputs_AbsoluteValue AbsoluteValue_Y;

void AbsoluteValue_initialize(void)
{
  AbsoluteValue_DWork.is_active_c1_AbsoluteValue = 0;
  AbsoluteValue_DWork.is_c1_AbsoluteValue = 0;
  AbsoluteValue_B.y = 0;
  AbsoluteValue_U.u = 0;
  AbsoluteValue_Y.y = 0;
}

void AbsoluteValue_output(int tid)
{
  if ((&AbsoluteValue_DWork)->is_active_c1_AbsoluteValue == 0) {
    AbsoluteValue_DWork.is_active_c1_AbsoluteValue = 1;
    if (AbsoluteValue_U.u >= 0) {
      AbsoluteValue_DWork.is_c1_AbsoluteValue = AbsoluteValue_IN_P;
    } else {
      AbsoluteValue_DWork.is_c1_AbsoluteValue = AbsoluteValue_IN_N;
    }
  } else {
    if (AbsoluteValue_DWork.is_c1_AbsoluteValue == AbsoluteValue_IN_N) {
      if (AbsoluteValue_U.u >= 0) {
        AbsoluteValue_DWork.is_c1_AbsoluteValue = 0;
        AbsoluteValue_B.y = AbsoluteValue_U.u;
        AbsoluteValue_DWork.is_c1_AbsoluteValue = AbsoluteValue_IN_P;
      } else {
        AbsoluteValue_B.y = -AbsoluteValue_U.u;
      }
    } else if (AbsoluteValue_DWork.is_c1_AbsoluteValue == AbsoluteValue_IN_P) {
      if (AbsoluteValue_U.u < 0) {
        AbsoluteValue_DWork.is_c1_AbsoluteValue = 0;
        AbsoluteValue_B.y = -AbsoluteValue_U.u;
        AbsoluteValue_DWork.is_c1_AbsoluteValue = AbsoluteValue_IN_N;
      } else {
        AbsoluteValue_B.y = AbsoluteValue_U.u;
      }
    }
  }
  AbsoluteValue_Y.y = AbsoluteValue_B.y;
}
