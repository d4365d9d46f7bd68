import { defineConfig } from 'vitest/config';

// DOM-dependent suites opt into jsdom with a per-file
// `// @vitest-environment jsdom` pragma; everything else runs plain node.
export default defineConfig({
  test: {
    include: ['test/**/*.test.ts'],
    environment: 'node',
  },
});
