/**
 * Questionnaire entry screen: the 58 items grouped under their competency
 * headings, five labeled answer options each, a progress indicator and a
 * submit control that mirrors the completeness gate.
 */

import { ApiClient, ApiError, Questionnaire } from "./api.js";
import { FormState } from "./form.js";
import { COMPETENCY_LABELS } from "./labels.js";

export interface QuestionnaireScreenOptions {
  container: HTMLElement;
  client: ApiClient;
  questionnaire: Questionnaire;
  campaignId: string;
  teacherId: string;
  token?: string;
  source?: "student" | "self";
}

function answerOptions(questionnaire: Questionnaire, itemId: string, form: FormState,
                       onChange: () => void): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "answer-options";
  // highest agreement first: 5 .. 1
  for (const value of [5, 4, 3, 2, 1]) {
    const label = document.createElement("label");
    label.className = "answer-option";
    const input = document.createElement("input");
    input.type = "radio";
    input.name = `answer-${itemId}`;
    input.value = String(value);
    input.addEventListener("change", () => {
      form.setAnswer(itemId, value);
      onChange();
    });
    const text = document.createElement("span");
    text.textContent = `${value} – ${questionnaire.answer_labels[String(value)] ?? value}`;
    label.append(input, text);
    wrap.append(label);
  }
  return wrap;
}

export function renderQuestionnaireScreen(options: QuestionnaireScreenOptions): FormState {
  const { container, client, questionnaire, campaignId, teacherId } = options;
  const source = options.source ?? "student";
  const form = new FormState(questionnaire.items.map((item) => item.id));

  container.innerHTML = "";
  const root = document.createElement("form");
  root.className = "questionnaire";
  root.addEventListener("submit", (event) => event.preventDefault());

  const progress = document.createElement("div");
  progress.className = "progress";
  progress.dataset.testid = "progress";

  const submit = document.createElement("button");
  submit.type = "button";
  submit.textContent = "Submit questionnaire";
  submit.className = "submit";
  submit.dataset.testid = "submit";

  const feedback = document.createElement("div");
  feedback.className = "feedback";
  feedback.dataset.testid = "feedback";

  const refresh = () => {
    progress.textContent = `Answered ${form.progressLabel}`;
    submit.disabled = !form.complete;
    for (const itemId of form.itemIds) {
      const row = root.querySelector(`[data-item-id="${itemId}"]`);
      if (row) {
        row.classList.toggle("missing", form.answerFor(itemId) === undefined);
      }
    }
  };

  for (const competency of questionnaire.competencies) {
    const section = document.createElement("section");
    section.className = "competency";
    const heading = document.createElement("h2");
    heading.textContent =
      `${competency.label ?? COMPETENCY_LABELS[competency.competency] ?? competency.competency}` +
      ` (${competency.item_count} items)`;
    section.append(heading);
    for (const item of questionnaire.items.filter((i) => i.competency === competency.competency)) {
      const row = document.createElement("fieldset");
      row.className = "item";
      row.dataset.itemId = item.id;
      const legend = document.createElement("legend");
      legend.textContent = item.text;
      row.append(legend, answerOptions(questionnaire, item.id, form, refresh));
      section.append(row);
    }
    root.append(section);
  }

  submit.addEventListener("click", async () => {
    if (!form.complete) {
      refresh();
      feedback.textContent = `Please answer all items (${form.progressLabel}).`;
      return;
    }
    submit.disabled = true;
    try {
      const stored = await client.submitSheet(campaignId, {
        source,
        subject_teacher_id: teacherId,
        answers: form.toPayload(),
        ...(source === "student" ? { token: options.token ?? "" } : {}),
      });
      container.innerHTML = "";
      const done = document.createElement("div");
      done.className = "confirmation";
      done.dataset.testid = "confirmation";
      done.innerHTML = `<h2>Thank you</h2>
        <p>Your questionnaire was recorded (receipt ${stored.sheet_id}).
        Answers are stored anonymously.</p>`;
      container.append(done);
    } catch (error) {
      if (error instanceof ApiError && (error.code === "TokenReused" || error.code === "InvalidToken")) {
        container.innerHTML = "";
        const used = document.createElement("div");
        used.className = "token-error";
        used.dataset.testid = "token-error";
        used.innerHTML = `<h2>Token already used</h2>
          <p>This submission link has already been used or is not valid.
          Nothing was submitted. Ask the campaign administrator for a new token.</p>`;
        container.append(used);
      } else if (error instanceof ApiError && error.code === "Incomplete") {
        const missing = (error.body.missing_items as string[] | undefined) ?? [];
        for (const itemId of missing) {
          root.querySelector(`[data-item-id="${itemId}"]`)?.classList.add("missing");
        }
        feedback.textContent = "The server rejected the sheet as incomplete.";
        submit.disabled = !form.complete;
      } else {
        feedback.textContent = error instanceof Error ? error.message : String(error);
        submit.disabled = !form.complete;
      }
    }
  });

  root.append(progress, submit, feedback);
  container.append(root);
  refresh();
  return form;
}
