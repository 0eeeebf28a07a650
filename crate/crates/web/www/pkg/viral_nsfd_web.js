export class Analysis {
    static __wrap(ptr) {
        const obj = Object.create(Analysis.prototype);
        obj.__wbg_ptr = ptr;
        AnalysisFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        AnalysisFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_analysis_free(ptr, 0);
    }
    /**
     * `[S*, I*, V*]`, or empty when R0 ≤ 1.
     * @returns {Float64Array}
     */
    endemic() {
        const ret = wasm.analysis_endemic(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get r01() {
        const ret = wasm.analysis_r01(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get r02() {
        const ret = wasm.analysis_r02(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get r0() {
        const ret = wasm.analysis_r0(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get s0() {
        const ret = wasm.analysis_s0(this.__wbg_ptr);
        return ret;
    }
}
if (Symbol.dispose) Analysis.prototype[Symbol.dispose] = Analysis.prototype.free;

export class ModelInput {
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        ModelInputFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_modelinput_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get alpha() {
        const ret = wasm.__wbg_get_modelinput_alpha(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get beta1() {
        const ret = wasm.__wbg_get_modelinput_beta1(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get beta2() {
        const ret = wasm.__wbg_get_modelinput_beta2(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get d_i() {
        const ret = wasm.__wbg_get_modelinput_d_i(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get d_s() {
        const ret = wasm.__wbg_get_modelinput_d_s(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get d_v() {
        const ret = wasm.__wbg_get_modelinput_d_v(this.__wbg_ptr);
        return ret;
    }
    /**
     * Common value of D1 = D2 = D3.
     * @returns {number}
     */
    get diffusion() {
        const ret = wasm.__wbg_get_modelinput_diffusion(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get gamma() {
        const ret = wasm.__wbg_get_modelinput_gamma(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get lambda() {
        const ret = wasm.__wbg_get_modelinput_lambda(this.__wbg_ptr);
        return ret;
    }
    /**
     * Saturating β·u/(1 + u) incidence instead of bilinear.
     * @returns {boolean}
     */
    get saturating() {
        const ret = wasm.__wbg_get_modelinput_saturating(this.__wbg_ptr);
        return ret !== 0;
    }
    /**
     * Reference rates with β1 = β2 = 3e-10 (persistent infection).
     */
    constructor() {
        const ret = wasm.modelinput_new();
        this.__wbg_ptr = ret;
        ModelInputFinalization.register(this, this.__wbg_ptr, this);
        return this;
    }
    /**
     * @param {number} arg0
     */
    set alpha(arg0) {
        wasm.__wbg_set_modelinput_alpha(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set beta1(arg0) {
        wasm.__wbg_set_modelinput_beta1(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set beta2(arg0) {
        wasm.__wbg_set_modelinput_beta2(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set d_i(arg0) {
        wasm.__wbg_set_modelinput_d_i(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set d_s(arg0) {
        wasm.__wbg_set_modelinput_d_s(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set d_v(arg0) {
        wasm.__wbg_set_modelinput_d_v(this.__wbg_ptr, arg0);
    }
    /**
     * Common value of D1 = D2 = D3.
     * @param {number} arg0
     */
    set diffusion(arg0) {
        wasm.__wbg_set_modelinput_diffusion(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set gamma(arg0) {
        wasm.__wbg_set_modelinput_gamma(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set lambda(arg0) {
        wasm.__wbg_set_modelinput_lambda(this.__wbg_ptr, arg0);
    }
    /**
     * Saturating β·u/(1 + u) incidence instead of bilinear.
     * @param {boolean} arg0
     */
    set saturating(arg0) {
        wasm.__wbg_set_modelinput_saturating(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) ModelInput.prototype[Symbol.dispose] = ModelInput.prototype.free;

export class SimulationView {
    static __wrap(ptr) {
        const obj = Object.create(SimulationView.prototype);
        obj.__wbg_ptr = ptr;
        SimulationViewFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        SimulationViewFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_simulationview_free(ptr, 0);
    }
    /**
     * @returns {string | undefined}
     */
    get failure() {
        const ret = wasm.simulationview_failure(this.__wbg_ptr);
        let v1;
        if (ret[0] !== 0) {
            v1 = getStringFromWasm0(ret[0], ret[1]);
            wasm.__wbindgen_free(ret[0], ret[1] * 1, 1);
        }
        return v1;
    }
    /**
     * @returns {number}
     */
    get final_time() {
        const ret = wasm.simulationview_final_time(this.__wbg_ptr);
        return ret;
    }
    /**
     * First step with a negative entry, or -1.
     * @returns {bigint}
     */
    get first_nonpositive() {
        const ret = wasm.simulationview_first_nonpositive(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {Float64Array}
     */
    i() {
        const ret = wasm.simulationview_i(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * Lyapunov values; shorter than `times` if a state left the domain.
     * @returns {Float64Array}
     */
    lyapunov() {
        const ret = wasm.simulationview_lyapunov(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * "L" (disease-free functional) or "H" (endemic functional).
     * @returns {string}
     */
    get lyapunov_kind() {
        let deferred1_0;
        let deferred1_1;
        try {
            const ret = wasm.simulationview_lyapunov_kind(this.__wbg_ptr);
            deferred1_0 = ret[0];
            deferred1_1 = ret[1];
            return getStringFromWasm0(ret[0], ret[1]);
        } finally {
            wasm.__wbindgen_free(deferred1_0, deferred1_1, 1);
        }
    }
    /**
     * Spatial mean of I at each recorded step.
     * @returns {Float64Array}
     */
    mean_i() {
        const ret = wasm.simulationview_mean_i(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    nodes() {
        const ret = wasm.simulationview_nodes(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    s() {
        const ret = wasm.simulationview_s(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get steps() {
        const ret = wasm.simulationview_steps(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * Time of each recorded step, starting at 0.
     * @returns {Float64Array}
     */
    times() {
        const ret = wasm.simulationview_times(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    v() {
        const ret = wasm.simulationview_v(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {string}
     */
    get verdict() {
        let deferred1_0;
        let deferred1_1;
        try {
            const ret = wasm.simulationview_verdict(this.__wbg_ptr);
            deferred1_0 = ret[0];
            deferred1_1 = ret[1];
            return getStringFromWasm0(ret[0], ret[1]);
        } finally {
            wasm.__wbindgen_free(deferred1_0, deferred1_1, 1);
        }
    }
}
if (Symbol.dispose) SimulationView.prototype[Symbol.dispose] = SimulationView.prototype.free;

export class TornadoView {
    static __wrap(ptr) {
        const obj = Object.create(TornadoView.prototype);
        obj.__wbg_ptr = ptr;
        TornadoViewFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        TornadoViewFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_tornadoview_free(ptr, 0);
    }
    /**
     * Parameter names sorted by decreasing |PRCC|.
     * @returns {string[]}
     */
    names() {
        const ret = wasm.tornadoview_names(this.__wbg_ptr);
        var v1 = getArrayJsValueFromWasm0(ret[0], ret[1]);
        wasm.__wbindgen_free(ret[0], ret[1] * 4, 4);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    prcc() {
        const ret = wasm.tornadoview_prcc(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) TornadoView.prototype[Symbol.dispose] = TornadoView.prototype.free;

/**
 * @param {ModelInput} input
 * @returns {Analysis}
 */
export function analyze(input) {
    _assertClass(input, ModelInput);
    const ret = wasm.analyze(input.__wbg_ptr);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Analysis.__wrap(ret[0]);
}

/**
 * Runs from S = 1e7, I = V = 100·e^(x/10) with M = 100 cells until the
 * steady residual drops below 1e-10 or `horizon` is reached.
 * @param {ModelInput} input
 * @param {number} dt
 * @param {number} horizon
 * @param {boolean} explicit
 * @returns {SimulationView}
 */
export function simulate(input, dt, horizon, explicit) {
    _assertClass(input, ModelInput);
    const ret = wasm.simulate(input.__wbg_ptr, dt, horizon, explicit);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return SimulationView.__wrap(ret[0]);
}

/**
 * PRCC of R0 over beta1, beta2, alpha, d_V, gamma, d_I, each drawn from a
 * zero-truncated normal with sd = `sd_fraction`·nominal.
 * @param {ModelInput} input
 * @param {number} samples
 * @param {number} sd_fraction
 * @param {number} seed
 * @returns {TornadoView}
 */
export function tornado(input, samples, sd_fraction, seed) {
    _assertClass(input, ModelInput);
    const ret = wasm.tornado(input.__wbg_ptr, samples, sd_fraction, seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return TornadoView.__wrap(ret[0]);
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_generic_0000000000000001: function(arg0, arg1) {
            // Cast intrinsic for `Ref(String) -> Externref`.
            const ret = getStringFromWasm0(arg0, arg1);
            return ret;
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./viral_nsfd_web_bg.js": import0,
    };
}

const AnalysisFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_analysis_free(ptr, 1));
const ModelInputFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_modelinput_free(ptr, 1));
const SimulationViewFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_simulationview_free(ptr, 1));
const TornadoViewFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_tornadoview_free(ptr, 1));

function _assertClass(instance, klass) {
    if (!(instance instanceof klass)) {
        throw new Error(`expected instance of ${klass.name}`);
    }
}

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

function getArrayJsValueFromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    const mem = getDataViewMemory0();
    const result = [];
    for (let i = ptr; i < ptr + 4 * len; i += 4) {
        result.push(wasm.__wbindgen_externrefs.get(mem.getUint32(i, true)));
    }
    wasm.__externref_drop_slice(ptr, len);
    return result;
}

let cachedDataViewMemory0 = null;
function getDataViewMemory0() {
    if (cachedDataViewMemory0 === null || cachedDataViewMemory0.buffer.detached === true || (cachedDataViewMemory0.buffer.detached === undefined && cachedDataViewMemory0.buffer !== wasm.memory.buffer)) {
        cachedDataViewMemory0 = new DataView(wasm.memory.buffer);
    }
    return cachedDataViewMemory0;
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedDataViewMemory0 = null;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('viral_nsfd_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
