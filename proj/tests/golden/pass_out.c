/* Generated by oobleck from Viscosity module `pass_out`. Do not edit. */
#include <stdbool.h>
#include <stdint.h>
#include <string.h>

struct _pass_out_output { uint64_t result; };
typedef struct _pass_out_output pass_out_output;

void pass_out_step(uint64_t out, pass_out_output *o, bool *valid, bool *ready) {
    o->result = out;
    *valid = true;
    *ready = true;
}

pass_out_output pass_out(uint64_t out) {
    pass_out_output o;
    bool valid = false;
    bool ready = false;
    pass_out_step(out, &o, &valid, &ready);
    return o;
}
