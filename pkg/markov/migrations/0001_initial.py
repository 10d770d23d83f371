from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ScenarioRun',
            fields=[
                ('id', models.AutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('digest', models.CharField(db_index=True, max_length=64)),
                ('analysis', models.CharField(max_length=32)),
                ('status', models.CharField(choices=[('ok', 'ok'), ('no_certificate', 'no certificate'), ('error', 'error')], max_length=16)),
                ('exit_code', models.IntegerField()),
                ('seed', models.IntegerField(default=0)),
                ('out_dir', models.CharField(max_length=500)),
                ('report', models.TextField(blank=True)),
                ('created', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ('-created', '-id'),
            },
        ),
    ]
