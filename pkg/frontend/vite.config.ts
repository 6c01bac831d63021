import { defineConfig } from "vite";

export default defineConfig({
  build: { outDir: "dist", target: "es2020" },
  server: {
    proxy: {
      "/ws": { target: "ws://127.0.0.1:8765", ws: true },
    },
  },
  test: {
    environment: "node",
    include: ["src/__tests__/*.test.ts"],
  },
});
