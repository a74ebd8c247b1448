# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled LZW kernels, byte-identical to slidecodec._lzw_py.

The dictionary is an open-addressing hash table keyed by (prefix_code << 8 |
next_byte); decode entries are (prefix, suffix) chains walked backwards into
the output buffer. Both loops run without the GIL so patch workers can overlap.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memset

from .errors import CorruptStreamError, TruncatedStreamError

cdef enum:
    CLEAR = 256
    END = 257
    FIRST_CODE = 258
    MIN_WIDTH = 9


cdef inline int _put(unsigned char** out, Py_ssize_t* out_len, Py_ssize_t* out_cap,
                     unsigned long long* acc, int* nbits, int width, int code) nogil:
    cdef unsigned char* grown
    if out_len[0] + 8 > out_cap[0]:
        out_cap[0] = out_cap[0] * 2
        grown = <unsigned char*> realloc(out[0], out_cap[0])
        if grown == NULL:
            return -1
        out[0] = grown
    acc[0] = (acc[0] << width) | <unsigned long long> code
    nbits[0] += width
    while nbits[0] >= 8:
        nbits[0] -= 8
        out[0][out_len[0]] = <unsigned char> ((acc[0] >> nbits[0]) & 0xFF)
        out_len[0] += 1
    return 0


def encode(bytes data, int max_width):
    cdef Py_ssize_t n = len(data)
    cdef const unsigned char* src = data
    cdef int capacity = 1 << max_width
    cdef int table_bits = max_width + 2
    cdef Py_ssize_t table_size = (<Py_ssize_t> 1) << table_bits
    cdef Py_ssize_t table_mask = table_size - 1
    cdef unsigned int* keys = <unsigned int*> malloc(table_size * sizeof(unsigned int))
    cdef int* vals = <int*> malloc(table_size * sizeof(int))
    cdef Py_ssize_t out_cap = n + (n >> 3) + 64
    cdef unsigned char* out = <unsigned char*> malloc(out_cap)
    cdef Py_ssize_t out_len = 0
    cdef unsigned long long acc = 0
    cdef int nbits = 0
    cdef int width = MIN_WIDTH
    cdef int next_code = FIRST_CODE
    cdef int prev = -1
    cdef int b, code, fail
    cdef unsigned int key
    cdef Py_ssize_t h, i

    if keys == NULL or vals == NULL or out == NULL:
        free(keys); free(vals); free(out)
        raise MemoryError()

    fail = 0
    with nogil:
        memset(keys, 0, table_size * sizeof(unsigned int))
        for i in range(n):
            b = src[i]
            if prev < 0:
                prev = b
                continue
            key = (<unsigned int> prev << 8) | <unsigned int> b
            h = <Py_ssize_t> ((key * 2654435761u) >> (32 - table_bits))
            code = -1
            while keys[h] != 0:
                if keys[h] == key + 1:
                    code = vals[h]
                    break
                h = (h + 1) & table_mask
            if code >= 0:
                prev = code
                continue
            if _put(&out, &out_len, &out_cap, &acc, &nbits, width, prev) < 0:
                fail = 1
                break
            if next_code < capacity:
                keys[h] = key + 1
                vals[h] = next_code
                next_code += 1
                if next_code - 1 >= (1 << width):
                    width += 1
            else:
                if _put(&out, &out_len, &out_cap, &acc, &nbits, width, CLEAR) < 0:
                    fail = 1
                    break
                memset(keys, 0, table_size * sizeof(unsigned int))
                next_code = FIRST_CODE
                width = MIN_WIDTH
            prev = b
        if fail == 0:
            if prev >= 0:
                if _put(&out, &out_len, &out_cap, &acc, &nbits, width, prev) < 0:
                    fail = 1
                # mirror the decoder's entry for the final data code; without
                # this END is one bit narrower than the decoder reads it
                elif FIRST_CODE < next_code < capacity:
                    next_code += 1
                    if next_code - 1 >= (1 << width):
                        width += 1
            if fail == 0:
                if _put(&out, &out_len, &out_cap, &acc, &nbits, width, END) < 0:
                    fail = 1
                elif nbits:
                    out[out_len] = <unsigned char> ((acc << (8 - nbits)) & 0xFF)
                    out_len += 1

    free(keys)
    free(vals)
    if fail:
        free(out)
        raise MemoryError()
    result = PyBytes_FromStringAndSize(<char*> out, out_len)
    free(out)
    return result


def decode(bytes data, int max_width):
    cdef Py_ssize_t n = len(data)
    cdef const unsigned char* src = data
    cdef int capacity = 1 << max_width
    cdef int* prefix = <int*> malloc(capacity * sizeof(int))
    cdef unsigned char* suffix = <unsigned char*> malloc(capacity)
    cdef int* length = <int*> malloc(capacity * sizeof(int))
    cdef unsigned char* first = <unsigned char*> malloc(capacity)
    cdef Py_ssize_t out_cap = 4 * n + 64
    cdef unsigned char* out = <unsigned char*> malloc(out_cap)
    cdef unsigned char* grown
    cdef Py_ssize_t out_len = 0
    cdef unsigned long long acc = 0
    cdef int nbits = 0
    cdef Py_ssize_t pos = 0
    cdef int width = MIN_WIDTH
    cdef int next_code = FIRST_CODE
    cdef int have_prev = 0
    cdef int prev_code = 0, prev_len = 0, prev_first = 0
    cdef int code = 0, cur_len, cur_first, kwk, idx, c, fail
    cdef Py_ssize_t tail

    if prefix == NULL or suffix == NULL or length == NULL or first == NULL or out == NULL:
        free(prefix); free(suffix); free(length); free(first); free(out)
        raise MemoryError()

    # fail: 0 ok, 1 truncated, 2 corrupt, 3 alloc
    fail = 0
    with nogil:
        while True:
            while nbits < width:
                if pos >= n:
                    fail = 1
                    break
                acc = (acc << 8) | <unsigned long long> src[pos]
                pos += 1
                nbits += 8
            if fail:
                break
            nbits -= width
            code = <int> ((acc >> nbits) & ((<unsigned long long> 1 << width) - 1))
            if code == END:
                break
            if code == CLEAR:
                next_code = FIRST_CODE
                width = MIN_WIDTH
                have_prev = 0
                continue
            kwk = 0
            if code < 256:
                cur_len = 1
                cur_first = code
            elif code >= FIRST_CODE and code < next_code:
                cur_len = length[code - FIRST_CODE]
                cur_first = first[code - FIRST_CODE]
            elif code == next_code and have_prev and next_code < capacity:
                kwk = 1
                cur_len = prev_len + 1
                cur_first = prev_first
            else:
                fail = 2
                break
            while out_len + cur_len > out_cap:
                out_cap = out_cap * 2
                grown = <unsigned char*> realloc(out, out_cap)
                if grown == NULL:
                    fail = 3
                    break
                out = grown
            if fail:
                break
            # materialize cur by walking its (prefix, suffix) chain backwards
            if kwk:
                out[out_len + cur_len - 1] = <unsigned char> prev_first
                c = prev_code
            else:
                c = code
            tail = out_len + cur_len - 1 - kwk
            while c >= FIRST_CODE:
                idx = c - FIRST_CODE
                out[tail] = suffix[idx]
                tail -= 1
                c = prefix[idx]
            out[tail] = <unsigned char> c
            if have_prev and next_code < capacity:
                idx = next_code - FIRST_CODE
                prefix[idx] = prev_code
                suffix[idx] = <unsigned char> cur_first
                length[idx] = prev_len + 1
                first[idx] = <unsigned char> prev_first
                next_code += 1
                if next_code >= (1 << width) and width < max_width:
                    width += 1
            out_len += cur_len
            prev_code = code
            prev_len = cur_len
            prev_first = cur_first
            have_prev = 1

    free(prefix)
    free(suffix)
    free(length)
    free(first)
    if fail:
        free(out)
        if fail == 1:
            raise TruncatedStreamError(
                f"stream ended at byte {pos} before the END code"
            )
        if fail == 2:
            raise CorruptStreamError(
                f"code {code} is beyond the dictionary (next would be {next_code})"
            )
        raise MemoryError()
    result = PyBytes_FromStringAndSize(<char*> out, out_len)
    free(out)
    return result
