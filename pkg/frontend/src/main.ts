// Entry point: evaluator token persistence, registration, first trial.

import { ApiClient } from "./api.js";
import { EvalApp } from "./ui.js";

const TOKEN_KEY = "poetone_evaluator_token";

function evaluatorToken(): string {
  const existing = window.localStorage.getItem(TOKEN_KEY);
  if (existing) return existing;
  const entered = window.prompt("请输入你的评审代号 Enter your evaluator token:");
  const token = (entered ?? "").trim() || `anon-${Math.random().toString(36).slice(2, 10)}`;
  window.localStorage.setItem(TOKEN_KEY, token);
  return token;
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const api = new ApiClient("");
  const token = evaluatorToken();
  await api.register(token);
  const app = new EvalApp(api, root, token);
  await app.start();
}

void boot();
