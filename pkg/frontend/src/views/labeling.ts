// Labeling screen: one posting at a time, dimension controls with inline
// guidance, a live category preview from the mirrored rule engine, and
// submission gated on client-side validity plus server acknowledgment.

import { ApiClient, ApiError } from "../api.js";
import { previewCategory, validate } from "../rules.js";
import type {
  Dimensions,
  MessageType,
  Person,
  Perspective,
  TaskResponse,
  TaxonomyPayload,
} from "../types.js";

const MESSAGE_TYPE_LABELS: Record<MessageType, string> = {
  personal_experience: "Personal experience (affected individual)",
  news_experience: "News about experiences & behavior",
  bereaved_experience: "Experience of a bereaved person",
  case_report: "Report of a particular case",
  call_for_action: "Call for action",
  irrelevant: "Irrelevant",
};

const PERSPECTIVE_LABELS: Record<Perspective, string> = {
  problem_suffering: "Problem & suffering",
  solution_coping: "Solution & coping",
  neither: "Neither (irrelevant only)",
};

const PERSON_LABELS: Record<Person, string> = {
  first: "First person",
  third: "Third person",
  not_applicable: "Not applicable",
};

function defaultDimensions(): Dimensions {
  return {
    message_type: "irrelevant",
    perspective: "neither",
    person: "not_applicable",
    serious: true,
    focus_on_bereaved: false,
    mentions_case: false,
  };
}

export class LabelingView {
  private dims: Dimensions = defaultDimensions();
  private task: TaskResponse | null = null;
  private submitting = false;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private taxonomy: TaxonomyPayload,
    private roundId: string,
    private coder: string,
  ) {}

  async start(): Promise<void> {
    await this.loadNext();
  }

  private async loadNext(): Promise<void> {
    try {
      this.task = await this.api.nextTask(this.roundId, this.coder);
    } catch (err) {
      this.renderError(err);
      return;
    }
    this.dims = defaultDimensions();
    this.render();
  }

  private renderError(err: unknown): void {
    const message = err instanceof ApiError && err.status === 0
      ? "Service unreachable."
      : String(err instanceof Error ? err.message : err);
    this.root.innerHTML = `
      <div class="banner error">
        ${escapeHtml(message)}
        <button id="retry">Retry</button>
      </div>`;
    this.root.querySelector("#retry")!.addEventListener("click", () => {
      void this.loadNext();
    });
  }

  private render(): void {
    const task = this.task;
    if (!task) return;
    if (task.done || !task.tweet) {
      this.root.innerHTML = `
        <div class="panel done">
          <h2>Round complete</h2>
          <p>You labeled ${task.progress.done} of ${task.progress.total} postings
             in round ${escapeHtml(this.roundId)}.</p>
        </div>`;
      return;
    }
    this.root.innerHTML = `
      <div class="panel">
        <div class="progress">posting ${task.progress.done + 1} / ${task.progress.total}
          · round ${escapeHtml(this.roundId)} · coder ${escapeHtml(this.coder)}</div>
        <blockquote class="tweet-text">${escapeHtml(task.tweet.text)}</blockquote>
        <form id="dims-form">
          <fieldset>
            <legend>Message type</legend>
            ${this.radioGroup("message_type", MESSAGE_TYPE_LABELS, this.dims.message_type)}
          </fieldset>
          <fieldset>
            <legend>Underlying perspective</legend>
            ${this.radioGroup("perspective", PERSPECTIVE_LABELS, this.dims.perspective)}
          </fieldset>
          <fieldset>
            <legend>Person</legend>
            ${this.radioGroup("person", PERSON_LABELS, this.dims.person)}
          </fieldset>
          <fieldset>
            <legend>Flags</legend>
            <label><input type="checkbox" name="serious" ${this.dims.serious ? "checked" : ""}>
              serious (about someone's life actually ending)</label>
            <label><input type="checkbox" name="focus_on_bereaved"
              ${this.dims.focus_on_bereaved ? "checked" : ""}>
              focuses on a bereaved person's experience</label>
            <label><input type="checkbox" name="mentions_case"
              ${this.dims.mentions_case ? "checked" : ""}>
              mentions an actual suicide case</label>
          </fieldset>
          <div id="validation" class="validation"></div>
          <div class="preview" id="preview"></div>
          <button type="submit" id="submit" disabled>Submit label</button>
        </form>
        <div id="guide" class="guide"></div>
      </div>`;
    this.wireForm();
    this.refreshDerived();
  }

  private radioGroup(name: keyof Dimensions, labels: Record<string, string>,
                     selected: string): string {
    return Object.entries(labels)
      .map(([value, text]) => `
        <label><input type="radio" name="${name}" value="${value}"
          ${value === selected ? "checked" : ""}> ${escapeHtml(text)}</label>`)
      .join("");
  }

  private wireForm(): void {
    const form = this.root.querySelector<HTMLFormElement>("#dims-form")!;
    form.addEventListener("change", () => {
      this.dims = this.readForm(form);
      this.refreshDerived();
    });
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
  }

  private readForm(form: HTMLFormElement): Dimensions {
    const data = new FormData(form);
    return {
      message_type: data.get("message_type") as MessageType,
      perspective: data.get("perspective") as Perspective,
      person: data.get("person") as Person,
      serious: data.has("serious"),
      focus_on_bereaved: data.has("focus_on_bereaved"),
      mentions_case: data.has("mentions_case"),
    };
  }

  private refreshDerived(): void {
    const issues = validate(this.dims);
    const preview = previewCategory(this.dims);
    const validation = this.root.querySelector("#validation")!;
    validation.innerHTML = issues
      .map((issue) => `<p class="issue">${escapeHtml(issue.field)}: ${escapeHtml(issue.message)}</p>`)
      .join("");
    const previewBox = this.root.querySelector("#preview")!;
    const guideBox = this.root.querySelector("#guide")!;
    if (preview !== null) {
      const guide = this.taxonomy.guide[preview];
      previewBox.innerHTML = `derived category:
        <strong>${escapeHtml(guide?.title ?? preview)}</strong>
        <code>${escapeHtml(preview)}</code>`;
      guideBox.innerHTML = guide
        ? `<h3>${escapeHtml(guide.title)}</h3>
           <p>${escapeHtml(guide.definition)}</p>
           <ul>${guide.examples.map((e) => `<li>${escapeHtml(e)}</li>`).join("")}</ul>`
        : "";
    } else {
      previewBox.textContent = "derived category: —";
      guideBox.innerHTML = "";
    }
    const submit = this.root.querySelector<HTMLButtonElement>("#submit")!;
    submit.disabled = issues.length > 0 || this.submitting;
  }

  private async submit(): Promise<void> {
    const task = this.task;
    if (!task?.tweet || this.submitting || validate(this.dims).length > 0) return;
    this.submitting = true;
    this.refreshDerived();
    try {
      // The label exists only once the service acknowledges it; on failure
      // nothing is queued locally and the same idempotent request can be retried.
      await this.api.submitLabel(this.roundId, this.coder, task.tweet.id, this.dims);
    } catch (err) {
      this.submitting = false;
      this.renderError(err);
      return;
    }
    this.submitting = false;
    await this.loadNext();
  }
}

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
