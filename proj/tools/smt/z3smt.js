#!/usr/bin/env node
// Reads an SMT-LIB2 script on stdin, evaluates it with Z3 (WASM), prints solver output.
const path = require('path');
const { init } = require(path.join(__dirname, 'node_modules', 'z3-solver'));
let input = '';
process.stdin.on('data', d => input += d);
process.stdin.on('end', async () => {
  try {
    const { Z3 } = await init();
    const cfg = Z3.mk_config();
    const ctx = Z3.mk_context(cfg);
    const out = await Z3.eval_smtlib2_string(ctx, input);
    process.stdout.write(out);
    process.exit(0);
  } catch (e) {
    process.stderr.write(String(e) + '\n');
    process.exit(3);
  }
});
