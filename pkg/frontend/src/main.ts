// App shell: coder identity, round selection, and the three screens
// (label / disagreements / dashboard) as tabs.

import { ApiClient } from "./api.js";
import { DashboardView } from "./views/dashboard.js";
import { DisagreementView } from "./views/disagreements.js";
import { LabelingView, escapeHtml } from "./views/labeling.js";
import type { RoundSummary, TaxonomyPayload } from "./types.js";

const api = new ApiClient();

type Screen = "label" | "disagreements" | "dashboard";

const state = {
  coder: localStorage.getItem("coder") ?? "",
  roundId: "",
  screen: "label" as Screen,
  taxonomy: null as TaxonomyPayload | null,
  rounds: [] as RoundSummary[],
  dashboard: null as DashboardView | null,
};

function el(id: string): HTMLElement {
  return document.getElementById(id)!;
}

async function boot(): Promise<void> {
  try {
    state.taxonomy = await api.getTaxonomy();
    state.rounds = await api.listRounds();
  } catch (err) {
    el("app").innerHTML = `
      <div class="banner error">Cannot reach the annotation service:
        ${escapeHtml(String(err))} <button id="boot-retry">Retry</button></div>`;
    el("app").querySelector("#boot-retry")!.addEventListener("click", () => void boot());
    return;
  }
  if (state.rounds.length > 0 && !state.roundId) {
    state.roundId = state.rounds[state.rounds.length - 1]!.id;
  }
  renderShell();
}

function renderShell(): void {
  const roundOptions = state.rounds
    .map((round) => `
      <option value="${round.id}" ${round.id === state.roundId ? "selected" : ""}>
        ${round.id} (${round.strategy}, ${round.size})
      </option>`)
    .join("");
  el("app").innerHTML = `
    <header>
      <h1>tweetsift labeling</h1>
      <div class="controls">
        <label>coder <input id="coder" value="${escapeHtml(state.coder)}"
          placeholder="your name"></label>
        <label>round <select id="round">${roundOptions}</select></label>
        <button id="new-round">new round</button>
      </div>
      <nav>
        ${(["label", "disagreements", "dashboard"] as Screen[])
          .map((screen) => `
            <button class="tab ${screen === state.screen ? "active" : ""}"
              data-screen="${screen}">${screen}</button>`)
          .join("")}
      </nav>
    </header>
    <main id="screen"></main>`;

  el("coder").addEventListener("change", (event) => {
    state.coder = (event.target as HTMLInputElement).value.trim();
    localStorage.setItem("coder", state.coder);
    void renderScreen();
  });
  el("round").addEventListener("change", (event) => {
    state.roundId = (event.target as HTMLSelectElement).value;
    void renderScreen();
  });
  el("new-round").addEventListener("click", () => void createRound());
  for (const tab of document.querySelectorAll<HTMLButtonElement>(".tab")) {
    tab.addEventListener("click", () => {
      state.screen = tab.dataset.screen as Screen;
      renderShell();
    });
  }
  void renderScreen();
}

async function createRound(): Promise<void> {
  if (!state.coder) {
    alert("set your coder name first");
    return;
  }
  const size = Number(prompt("how many postings in the new random round?", "20"));
  if (!Number.isFinite(size) || size < 1) return;
  const second = prompt("second coder (blank for single-coded)", "") ?? "";
  const coders = second.trim() ? [state.coder, second.trim()] : [state.coder];
  try {
    const round = await api.createRound({ strategy: "random", targets: size, coders });
    state.rounds = await api.listRounds();
    state.roundId = round.id;
  } catch (err) {
    alert(String(err));
    return;
  }
  renderShell();
}

async function renderScreen(): Promise<void> {
  state.dashboard?.stop();
  state.dashboard = null;
  const container = el("screen");
  if (!state.taxonomy) return;
  if (!state.roundId) {
    container.innerHTML = `<p class="empty">No rounds yet — create one to start labeling.</p>`;
    return;
  }
  if (!state.coder && state.screen !== "dashboard") {
    container.innerHTML = `<p class="empty">Enter your coder name above.</p>`;
    return;
  }
  if (state.screen === "label") {
    await new LabelingView(container, api, state.taxonomy, state.roundId,
                           state.coder).start();
  } else if (state.screen === "disagreements") {
    await new DisagreementView(container, api, state.taxonomy, state.roundId,
                               state.coder).refresh();
  } else {
    state.dashboard = new DashboardView(container, api, state.taxonomy, state.roundId);
    state.dashboard.start();
  }
}

void boot();
