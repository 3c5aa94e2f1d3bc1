// Agreement dashboard: polls the kappa and disagreement endpoints and
// renders served values verbatim (no client-side recomputation).

import { ApiClient, ApiError } from "../api.js";
import { escapeHtml } from "./labeling.js";
import type { KappaResponse, TaxonomyPayload } from "../types.js";

const POLL_MS = 4000;

function formatKappa(result: KappaResponse): string {
  return `<b>${result.kappa.toFixed(2)}</b>
    <span class="ci">(95% CI ${result.ci[0].toFixed(2)}–${result.ci[1].toFixed(2)},
    n=${result.n})</span>`;
}

export class DashboardView {
  private timer: ReturnType<typeof setInterval> | null = null;
  private excludeIrrelevant = false;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private taxonomy: TaxonomyPayload,
    private roundId: string,
  ) {}

  start(): void {
    void this.refresh();
    this.timer = setInterval(() => void this.refresh(), POLL_MS);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  private async kappaCell(level: number, exclude?: string): Promise<string> {
    try {
      return formatKappa(await this.api.getKappa(this.roundId, level, exclude));
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        return `<span class="placeholder">not enough overlap yet</span>`;
      }
      return `<span class="placeholder">${escapeHtml(String(err))}</span>`;
    }
  }

  private async refresh(): Promise<void> {
    const exclude = this.excludeIrrelevant ? "irrelevant" : undefined;
    const [k12, k6, k2] = await Promise.all([
      this.kappaCell(12),
      this.kappaCell(6, exclude),
      this.kappaCell(2),
    ]);
    let disagreementCount = 0;
    let distribution: Record<string, number> = {};
    try {
      const items = (await this.api.getDisagreements(this.roundId, 6)).items;
      disagreementCount = items.length;
      const csv = await this.api.exportCsv([this.roundId]);
      distribution = countCategories(csv);
    } catch {
      /* served stats stay at defaults until reachable */
    }
    const total = Object.values(distribution).reduce((a, b) => a + b, 0);
    const bars = Object.entries(distribution)
      .sort((a, b) => b[1] - a[1])
      .map(([category, count]) => {
        const percent = total ? (100 * count) / total : 0;
        return `
          <div class="bar-row">
            <span class="bar-label">${escapeHtml(category)}</span>
            <span class="bar" style="width:${percent.toFixed(1)}%"></span>
            <span class="bar-value">${count}</span>
          </div>`;
      })
      .join("");
    this.root.innerHTML = `
      <div class="panel">
        <h2>Agreement — round ${escapeHtml(this.roundId)}</h2>
        <table class="kappa-table">
          <tr><th>12 fine categories</th><td>${k12}</td></tr>
          <tr><th>6 classes${this.excludeIrrelevant ? " (excl. irrelevant)" : ""}</th><td>${k6}</td></tr>
          <tr><th>about suicide vs off-topic</th><td>${k2}</td></tr>
        </table>
        <label class="exclude-toggle">
          <input type="checkbox" id="exclude" ${this.excludeIrrelevant ? "checked" : ""}>
          exclude the irrelevant class at the 6-class level
        </label>
        <p>${disagreementCount} open disagreement(s) at the 6-class level.</p>
        <h3>Current label distribution</h3>
        <div class="bars">${bars || "<p class='empty'>no labels yet</p>"}</div>
      </div>`;
    this.root.querySelector<HTMLInputElement>("#exclude")!
      .addEventListener("change", (event) => {
        this.excludeIrrelevant = (event.target as HTMLInputElement).checked;
        void this.refresh();
      });
  }
}

export function countCategories(csv: string): Record<string, number> {
  const lines = csv.trim().split("\n");
  if (lines.length < 2) return {};
  const header = lines[0]!.split(",");
  const categoryIndex = header.indexOf("category");
  const counts: Record<string, number> = {};
  for (const line of lines.slice(1)) {
    const category = line.split(",")[categoryIndex];
    if (category) counts[category] = (counts[category] ?? 0) + 1;
  }
  return counts;
}
